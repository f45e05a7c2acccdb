#ifndef CLIFFGEN_H
#define CLIFFGEN_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_ARGUMENT = 2,
  CG_STATUS_VERIFICATION_FAILED = 3,
  CG_STATUS_SINGULAR = 4,
  CG_STATUS_NOT_UNITARY = 5,
  CG_STATUS_PANIC = 6,
} CgStatus;

/**
 * Structural anticommuting families at one angle list.
 */
typedef struct CgFamilies CgFamilies;

/**
 * Dense complex matrix.
 */
typedef struct CgMatrix CgMatrix;

/**
 * GL(4) four-vector parameters.
 */
typedef struct CgParams CgParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call into the library on the same thread.
 */
const char *cg_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cg_string_free(char *s);

/**
 * Builds a matrix from `2 * order * order` interleaved row-major doubles.
 *
 * # Safety
 * `entries` must point to `2 * order * order` readable doubles.
 */
enum CgStatus cg_matrix_new(size_t order, const double *entries, struct CgMatrix **out);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
void cg_matrix_free(struct CgMatrix *m);

/**
 * Order of `m`, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t cg_matrix_order(const struct CgMatrix *m);

/**
 * Copies the entries into `out`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle and `out` must have room for `len` doubles.
 */
enum CgStatus cg_matrix_entries(const struct CgMatrix *m, double *out, size_t len);

/**
 * `a * b`.
 *
 * # Safety
 * `a` and `b` must be live handles.
 */
enum CgStatus cg_matrix_mul(const struct CgMatrix *a,
                            const struct CgMatrix *b,
                            struct CgMatrix **out);

/**
 * LU determinant.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable.
 */
enum CgStatus cg_matrix_det(const struct CgMatrix *m, double *re, double *im);

/**
 * Generator with multi-index `index[0..n]`, each in 0..=3.
 *
 * # Safety
 * `index` must hold `n` bytes; `angles` must be null or hold `3 n` doubles.
 */
enum CgStatus cg_generator_new(const uint8_t *index,
                               size_t n,
                               const double *angles,
                               struct CgMatrix **out);

/**
 * Structural families of order `2^n`.
 *
 * # Safety
 * `angles` must be null or hold `3 n` doubles.
 */
enum CgStatus cg_families_new(size_t n, const double *angles, struct CgFamilies **out);

/**
 * # Safety
 * `f` must be null or a live handle.
 */
void cg_families_free(struct CgFamilies *f);

/**
 * Number of families, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t cg_families_count(const struct CgFamilies *f);

/**
 * Space-separated member labels of family `i` (0-based).
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum CgStatus cg_families_describe(const struct CgFamilies *f, size_t i, char **out);

/**
 * Checks the defining relations of family `i`. Writes the largest residual
 * and returns `VerificationFailed` when it exceeds `tol`.
 *
 * # Safety
 * `f` must be a live handle; `max_residual` must be null or writable.
 */
enum CgStatus cg_families_verify(const struct CgFamilies *f,
                                 size_t i,
                                 double tol,
                                 double *max_residual);

/**
 * Number of maximal anticommuting sets found by clique enumeration, for
 * `n` in 1..=3. Edges are confirmed at a second angle list drawn from
 * `seed`.
 *
 * # Safety
 * `angles` must be null or hold `3 n` doubles; `count` must be writable.
 */
enum CgStatus cg_brute_force_count(size_t n, const double *angles, uint64_t seed, size_t *count);

/**
 * CSV Cayley sub-table of the quintet A10, A21, A22, A23, A30.
 *
 * # Safety
 * `angles` must be null or hold 6 doubles; `out` must be writable.
 */
enum CgStatus cg_cayley_quintet_csv(const double *angles, char **out);

/**
 * Parses parameters from JSON `{"k": {"s": [re, im], "v": [...]}, ..., "angles": {...}}`.
 *
 * # Safety
 * `json` must be a nul-terminated string.
 */
enum CgStatus cg_params_from_json(const char *json, struct CgParams **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CgStatus cg_params_to_json(const struct CgParams *p, char **out);

/**
 * Random parameters drawn from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CgStatus cg_params_random(uint64_t seed, struct CgParams **out);

/**
 * # Safety
 * `p` must be null or a live handle.
 */
void cg_params_free(struct CgParams *p);

/**
 * Parameters of `Y2 Y1`. Both must share the same angles.
 *
 * # Safety
 * `p2` and `p1` must be live handles.
 */
enum CgStatus cg_params_compose(const struct CgParams *p2,
                                const struct CgParams *p1,
                                struct CgParams **out);

/**
 * Closed-form inverse; `Singular` when `|det| <= floor`.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum CgStatus cg_params_inverse(const struct CgParams *p, double floor, struct CgParams **out);

/**
 * Closed-form determinant.
 *
 * # Safety
 * `p` must be a live handle; `re` and `im` must be writable.
 */
enum CgStatus cg_params_det(const struct CgParams *p, double *re, double *im);

/**
 * The order-4 matrix of `p`.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum CgStatus cg_params_to_matrix(const struct CgParams *p, struct CgMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLIFFGEN_H */
