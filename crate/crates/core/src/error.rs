use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("seed matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("seed matrix diagonal entry {index} is {value}, expected 1")]
    DiagonalNotUnit { index: usize, value: f64 },

    #[error("seed matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("parity mismatch: operation needs {expected} n, got n = {n}")]
    ParityMismatch { expected: &'static str, n: usize },

    #[error("no usable irrep blocks for n = {0} without an external reference")]
    EmptyUsableBlocks(usize),

    #[error("oracle scale exceeded: {0}")]
    ScaleExceeded(String),

    #[error("outcome density is negative ({value:e}) at angle {angle}")]
    NegativeDensity { angle: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
