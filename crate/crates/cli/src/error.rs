use gleason::GleasonError;
use thiserror::Error;

/// Exit 1 for bad input, 2 when a run violates one of the tool's own
/// contracts.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("assertion failed at {pointer}: {message}")]
    Assertion { pointer: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Assertion { .. } => 2,
        }
    }

    pub fn assertion(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Assertion {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Library errors raised while reading inputs are input errors; the
    /// rest are failures of the computation at `pointer`.
    pub fn from_library(e: GleasonError, pointer: &str) -> Self {
        match e {
            GleasonError::InvalidInput(_)
            | GleasonError::DimensionMismatch { .. }
            | GleasonError::PointOutsideDomain { .. }
            | GleasonError::NonVanishing { .. }
            | GleasonError::DegenerateDirection { .. }
            | GleasonError::PatchSeam { .. } => CliError::Input(e.to_string()),
            other => CliError::assertion(pointer, other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub trait Context<T> {
    fn at(self, pointer: &str) -> CliResult<T>;
}

impl<T> Context<T> for Result<T, GleasonError> {
    fn at(self, pointer: &str) -> CliResult<T> {
        self.map_err(|e| CliError::from_library(e, pointer))
    }
}
