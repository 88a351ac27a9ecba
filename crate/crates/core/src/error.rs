use thiserror::Error;

/// Errors raised by the statistical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("direction norm {0:e} is below 1e-8")]
    DegenerateDirection(f64),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sample too small to split: n = {0}, need at least 9")]
    SampleTooSmall(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("covariance is identically zero, candidate directions are undefined")]
    ZeroCovariance,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("repetition {rep} (seed {seed}) failed: {message}")]
    RepetitionFailed { rep: usize, seed: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
