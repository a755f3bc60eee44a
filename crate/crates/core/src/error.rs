use thiserror::Error;

/// Errors raised by the matrix algebra, the measures, and the spectral pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite: pivot {pivot} = {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("diagonal entry {0} is not strictly positive")]
    NonPositiveDiagonal(usize),

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("real matrix has a nonzero imaginary part at ({row}, {col})")]
    ImaginaryPart { row: usize, col: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("index sets overlap at index {0}")]
    IndexOverlap(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("need at least {required} variables, got {found}")]
    TooFewVariables { required: usize, found: usize },

    #[error("AR model is unstable (spectral radius estimate {radius})")]
    UnstableModel { radius: f64 },

    #[error("spectral radius iteration did not converge (best estimate {estimate})")]
    ConvergenceFailure { estimate: f64 },

    #[error("degrees of freedom must exceed 2, got {0}")]
    InvalidDof(f64),

    #[error("{rows} samples cannot be split into epochs of length {epoch_len}")]
    EpochMismatch { rows: usize, epoch_len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
