use std::path::PathBuf;

use thiserror::Error;

/// Exit statuses. Numeric failure (1) is an outcome, not an error.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("malformed input {path}: {reason}")]
    Data { path: PathBuf, reason: String },

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] hyperbolic_sd::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use hyperbolic_sd::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data { .. } => EXIT_DATA,
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(E::Config(_) | E::Precondition(_) | E::Domain(_) | E::Unsupported(_)) => {
                EXIT_USAGE
            }
            // the numerics themselves gave out
            CliError::Core(_) => EXIT_FAIL,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn data(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CliError::Data {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
