//! Euler-angle parametrized Clifford algebra generators.
//!
//! Hermitian involutions of order `2^n` are built as Kronecker products of
//! parametric Pauli matrices. The crate enumerates and verifies the
//! anticommuting families they form, decomposes matrices over the
//! generator, Dirac and Gell-Mann bases, and implements the four-vector
//! parametrization of GL(4).

pub mod anticommute;
pub mod cli;
pub mod complexmat;
pub mod decomp;
pub mod error;
pub mod euler;
pub mod generators;
pub mod gl4;

pub use complexmat::{Complex, ComplexMatrix};
pub use error::{Error, Result};
pub use euler::{euler_matrix, DirectionCosines, EulerAngles};
pub use generators::{AngleList, GeneratorIndex, LabeledGenerator};

/// Residual bound for exact algebraic identities on generator matrices.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for closed-form GL(4) formulas against their matrix oracles.
pub const GL4_TOL: f64 = 1e-9;
/// Default floor on `|det|` below which a GL(4) element is treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;
