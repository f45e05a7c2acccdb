//! C interface to `cliffgen`.
//!
//! Objects cross the boundary as opaque handles that must be released with
//! the matching `*_free` function. Every fallible call returns a
//! [`CgStatus`]; on failure [`cg_last_error`] describes what went wrong.
//! Strings returned by the library are released with [`cg_string_free`].
//! Complex numbers are passed as interleaved `(re, im)` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cliffgen::anticommute::{brute_force_maximal_sets, structural_families, verify_family, BruteForceOptions};
use cliffgen::decomp::cayley_table;
use cliffgen::generators::{all_generators, build_generator, AngleList, GeneratorIndex};
use cliffgen::gl4::{compose, determinant_formula, inverse_params};
use cliffgen::{Complex, ComplexMatrix, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VerificationFailed = 3,
    Singular = 4,
    NotUnitary = 5,
    Panic = 6,
}

/// Dense complex matrix.
pub struct CgMatrix(ComplexMatrix);

/// Structural anticommuting families at one angle list.
pub struct CgFamilies(Vec<cliffgen::anticommute::GeneratorFamily>);

/// GL(4) four-vector parameters.
pub struct CgParams(cliffgen::gl4::FourVectorParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CgStatus, msg: impl Into<String>) -> CgStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> CgStatus {
    let status = match e {
        Error::Singular { .. } => CgStatus::Singular,
        Error::NotUnitary(_) => CgStatus::NotUnitary,
        Error::VerificationFailed(_) | Error::QuasiClosureViolation { .. } | Error::NotParametric(_) => {
            CgStatus::VerificationFailed
        }
        _ => CgStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CgStatus>) -> CgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CgStatus::Panic, "internal panic"),
    }
}

fn nonnull<T>(p: *const T, name: &str) -> Result<(), CgStatus> {
    if p.is_null() {
        Err(fail(CgStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), CgStatus> {
    nonnull(out, "out")?;
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), CgStatus> {
    nonnull(out, "out")?;
    let c = CString::new(s).map_err(|_| fail(CgStatus::InvalidArgument, "string contains nul"))?;
    *out = c.into_raw();
    Ok(())
}

/// `angles` holds `3 n` doubles, or is null for trivial angles.
unsafe fn read_angles(angles: *const f64, n: usize) -> Result<AngleList, CgStatus> {
    if !(1..=4).contains(&n) {
        return Err(fail(
            CgStatus::InvalidArgument,
            format!("n must be between 1 and 4, got {n}"),
        ));
    }
    if angles.is_null() {
        return Ok(AngleList::trivial(n));
    }
    AngleList::from_flat(std::slice::from_raw_parts(angles, 3 * n)).map_err(from_error)
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a matrix from `2 * order * order` interleaved row-major doubles.
///
/// # Safety
/// `entries` must point to `2 * order * order` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_new(order: usize, entries: *const f64, out: *mut *mut CgMatrix) -> CgStatus {
    guard(|| {
        nonnull(entries, "entries")?;
        let raw = std::slice::from_raw_parts(entries, 2 * order * order);
        let values = raw.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect();
        let m = ComplexMatrix::new(order, values).map_err(from_error)?;
        write_out(out, CgMatrix(m))
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_free(m: *mut CgMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Order of `m`, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_order(m: *const CgMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.order())
}

/// Copies the entries into `out`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_entries(m: *const CgMatrix, out: *mut f64, len: usize) -> CgStatus {
    guard(|| {
        nonnull(m, "matrix")?;
        nonnull(out, "out")?;
        let m = &(*m).0;
        let need = 2 * m.order() * m.order();
        if len < need {
            return Err(fail(
                CgStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {need}"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, need);
        for (d, z) in dst.chunks_exact_mut(2).zip(m.entries()) {
            d[0] = z.re;
            d[1] = z.im;
        }
        Ok(())
    })
}

/// `a * b`.
///
/// # Safety
/// `a` and `b` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_mul(a: *const CgMatrix, b: *const CgMatrix, out: *mut *mut CgMatrix) -> CgStatus {
    guard(|| {
        nonnull(a, "a")?;
        nonnull(b, "b")?;
        let p = (*a).0.matmul(&(*b).0).map_err(from_error)?;
        write_out(out, CgMatrix(p))
    })
}

/// LU determinant.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_matrix_det(m: *const CgMatrix, re: *mut f64, im: *mut f64) -> CgStatus {
    guard(|| {
        nonnull(m, "matrix")?;
        nonnull(re, "re")?;
        nonnull(im, "im")?;
        let d = (*m).0.det_lu();
        *re = d.re;
        *im = d.im;
        Ok(())
    })
}

/// Generator with multi-index `index[0..n]`, each in 0..=3.
///
/// # Safety
/// `index` must hold `n` bytes; `angles` must be null or hold `3 n` doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_generator_new(
    index: *const u8,
    n: usize,
    angles: *const f64,
    out: *mut *mut CgMatrix,
) -> CgStatus {
    guard(|| {
        nonnull(index, "index")?;
        let angles = read_angles(angles, n)?;
        let idx = GeneratorIndex::new(std::slice::from_raw_parts(index, n).to_vec()).map_err(from_error)?;
        let g = build_generator(&idx, &angles).map_err(from_error)?;
        write_out(out, CgMatrix(g.matrix))
    })
}

/// Structural families of order `2^n`.
///
/// # Safety
/// `angles` must be null or hold `3 n` doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_families_new(n: usize, angles: *const f64, out: *mut *mut CgFamilies) -> CgStatus {
    guard(|| {
        let angles = read_angles(angles, n)?;
        let f = structural_families(&angles).map_err(from_error)?;
        write_out(out, CgFamilies(f))
    })
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_families_free(f: *mut CgFamilies) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of families, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_families_count(f: *const CgFamilies) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Space-separated member labels of family `i` (0-based).
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_families_describe(f: *const CgFamilies, i: usize, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        nonnull(f, "families")?;
        let families: &[_] = &(*f).0;
        let fam = families
            .get(i)
            .ok_or_else(|| fail(CgStatus::InvalidArgument, format!("no family {i}")))?;
        write_string(out, fam.describe())
    })
}

/// Checks the defining relations of family `i`. Writes the largest residual
/// and returns `VerificationFailed` when it exceeds `tol`.
///
/// # Safety
/// `f` must be a live handle; `max_residual` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cg_families_verify(
    f: *const CgFamilies,
    i: usize,
    tol: f64,
    max_residual: *mut f64,
) -> CgStatus {
    guard(|| {
        nonnull(f, "families")?;
        let families: &[_] = &(*f).0;
        let fam = families
            .get(i)
            .ok_or_else(|| fail(CgStatus::InvalidArgument, format!("no family {i}")))?;
        let report = verify_family(fam, tol);
        if !max_residual.is_null() {
            *max_residual = report.max_residual();
        }
        if report.passed {
            Ok(())
        } else {
            Err(fail(CgStatus::VerificationFailed, report.summary()))
        }
    })
}

/// Number of maximal anticommuting sets found by clique enumeration, for
/// `n` in 1..=3. Edges are confirmed at a second angle list drawn from
/// `seed`.
///
/// # Safety
/// `angles` must be null or hold `3 n` doubles; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_brute_force_count(n: usize, angles: *const f64, seed: u64, count: *mut usize) -> CgStatus {
    guard(|| {
        nonnull(count, "count")?;
        let angles = read_angles(angles, n)?;
        let confirm = AngleList::random(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let sets = brute_force_maximal_sets(&angles, &confirm, BruteForceOptions::default()).map_err(from_error)?;
        *count = sets.len();
        Ok(())
    })
}

/// CSV Cayley sub-table of the quintet A10, A21, A22, A23, A30.
///
/// # Safety
/// `angles` must be null or hold 6 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_cayley_quintet_csv(angles: *const f64, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let angles = read_angles(angles, 2)?;
        let table = cayley_table(&all_generators(&angles), cliffgen::STRUCTURAL_TOL).map_err(from_error)?;
        let labels: Vec<GeneratorIndex> = ["A10", "A21", "A22", "A23", "A30"]
            .iter()
            .map(|s| s.parse().expect("valid label"))
            .collect();
        let sub = table.subtable(&labels).map_err(from_error)?;
        write_string(out, sub.to_csv())
    })
}

/// Parses parameters from JSON `{"k": {"s": [re, im], "v": [...]}, ..., "angles": {...}}`.
///
/// # Safety
/// `json` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cg_params_from_json(json: *const c_char, out: *mut *mut CgParams) -> CgStatus {
    guard(|| {
        nonnull(json, "json")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(CgStatus::InvalidArgument, "json is not UTF-8"))?;
        let p: cliffgen::gl4::FourVectorParams =
            serde_json::from_str(text).map_err(|e| fail(CgStatus::InvalidArgument, e.to_string()))?;
        let p = cliffgen::gl4::FourVectorParams::new(p.k, p.n, p.l, p.m, p.angles).map_err(from_error)?;
        write_out(out, CgParams(p))
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_params_to_json(p: *const CgParams, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        nonnull(p, "params")?;
        write_string(out, serde_json::to_string(&(*p).0).expect("serializable"))
    })
}

/// Random parameters drawn from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_params_random(seed: u64, out: *mut *mut CgParams) -> CgStatus {
    guard(|| {
        let p = cliffgen::gl4::FourVectorParams::random(&mut ChaCha8Rng::seed_from_u64(seed));
        write_out(out, CgParams(p))
    })
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_params_free(p: *mut CgParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parameters of `Y2 Y1`. Both must share the same angles.
///
/// # Safety
/// `p2` and `p1` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cg_params_compose(
    p2: *const CgParams,
    p1: *const CgParams,
    out: *mut *mut CgParams,
) -> CgStatus {
    guard(|| {
        nonnull(p2, "p2")?;
        nonnull(p1, "p1")?;
        let c = compose(&(*p2).0, &(*p1).0).map_err(from_error)?;
        write_out(out, CgParams(c))
    })
}

/// Closed-form inverse; `Singular` when `|det| <= floor`.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_params_inverse(p: *const CgParams, floor: f64, out: *mut *mut CgParams) -> CgStatus {
    guard(|| {
        nonnull(p, "params")?;
        let inv = inverse_params(&(*p).0, floor).map_err(from_error)?;
        write_out(out, CgParams(inv))
    })
}

/// Closed-form determinant.
///
/// # Safety
/// `p` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_params_det(p: *const CgParams, re: *mut f64, im: *mut f64) -> CgStatus {
    guard(|| {
        nonnull(p, "params")?;
        nonnull(re, "re")?;
        nonnull(im, "im")?;
        let d = determinant_formula(&(*p).0);
        *re = d.re;
        *im = d.im;
        Ok(())
    })
}

/// The order-4 matrix of `p`.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_params_to_matrix(p: *const CgParams, out: *mut *mut CgMatrix) -> CgStatus {
    guard(|| {
        nonnull(p, "params")?;
        write_out(out, CgMatrix((*p).0.to_matrix()))
    })
}
