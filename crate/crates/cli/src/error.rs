//! CLI failures and their process exit codes.

use hoi_core::formats::FormatError;
use hoi_core::Error;
use thiserror::Error;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_PD: u8 = 3;
pub const EXIT_PARTITION: u8 = 4;
pub const EXIT_EPOCH: u8 = 5;
pub const EXIT_UNSTABLE: u8 = 6;
pub const EXIT_VERIFY: u8 = 7;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),

    #[error("{0}")]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Input(String),

    #[error("bad partition: {0}")]
    Partition(String),

    /// A check or oracle did not pass; details were already printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(e) | Self::Format(FormatError::Data(e)) => core_code(e),
            Self::Format(_) | Self::Io { .. } | Self::Input(_) => EXIT_INPUT,
            Self::Partition(_) => EXIT_PARTITION,
            Self::Failed(_) => EXIT_VERIFY,
        }
    }
}

fn core_code(e: &Error) -> u8 {
    match e {
        Error::NotPositiveDefinite { .. } | Error::NonPositiveDiagonal(_) => EXIT_NOT_PD,
        Error::PartitionMismatch(_) | Error::IndexOverlap(_) => EXIT_PARTITION,
        Error::EpochMismatch { .. } => EXIT_EPOCH,
        Error::UnstableModel { .. } | Error::ConvergenceFailure { .. } => EXIT_UNSTABLE,
        _ => EXIT_INPUT,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
