use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Jacobi exponents a = {a}, b = {b}: both must be finite and > -1")]
    InvalidSpec { a: f64, b: f64 },

    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },

    #[error("degree L = {degree} exceeds N = {n}: Gauss exactness needs 2L <= 2N + 1")]
    DegreeTooHigh { degree: usize, n: usize },

    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("regularization parameter must be finite and >= 0, got {0}")]
    InvalidLambda(f64),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("eigensolver did not converge for eigenvalue {index} within {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("nodes {i} and {j} coincide or are out of order ({xi} vs {xj})")]
    DuplicateNodes { i: usize, j: usize, xi: f64, xj: f64 },

    #[error("barycentric weight {0} is zero")]
    ZeroWeight(usize),

    #[error("barycentric weights do not alternate in sign at index {0}")]
    SignPattern(usize),

    #[error("barycentric denominator vanished at x = {0} (internal error)")]
    DegenerateDenominator(f64),

    #[error("normal-equations matrix is not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("point {0} lies outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("signal power is zero; SNR is undefined")]
    ZeroSignalPower,

    #[error("invalid noise parameter: {0}")]
    InvalidNoise(&'static str),
}
