use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected order {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid matrix shape: order {order} with {len} entries")]
    InvalidShape { order: usize, len: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("singular matrix (|det| = {determinant:e} below floor {floor:e})")]
    Singular { determinant: f64, floor: f64 },

    #[error("generator index component {0} out of range 0..=3")]
    IndexOutOfRange(u8),

    #[error("index has {index} factors but {angles} angle triples were supplied")]
    AngleCountMismatch { index: usize, angles: usize },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("family failed verification: {0}")]
    VerificationFailed(String),

    #[error("incomplete basis: {0}")]
    IncompleteBasis(String),

    #[error("product {row} * {col} is not a unit multiple of any basis element (residual {residual:e})")]
    QuasiClosureViolation { row: String, col: String, residual: f64 },

    #[error("recovered direction cosine has imaginary part {0:e}")]
    NotParametric(f64),

    #[error("order exponent {0} not supported here")]
    UnsupportedOrder(usize),

    #[error("signature count {q} exceeds family size {size}")]
    SignatureOutOfRange { q: usize, size: usize },

    #[error("parameter sets use different angles")]
    AngleMismatch,

    #[error("unitarity conditions violated: {0}")]
    NotUnitary(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
