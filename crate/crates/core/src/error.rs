use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric: max|A + A^T| = {max_asymmetry:e}")]
    NotSkewSymmetric { max_asymmetry: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("malformed data: {0}")]
    Format(String),

    #[error("no oscillating sector: all {dim} modes are static")]
    NoOscillatingSector { dim: usize },

    #[error("measurement maps rejected ({verdict}): system overlap |<up|down>| = {overlap:e}")]
    NonOrthogonalStates { verdict: String, overlap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
