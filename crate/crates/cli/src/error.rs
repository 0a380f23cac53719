use std::path::PathBuf;

/// Process exit status for a passing run.
pub const EXIT_PASS: i32 = 0;
/// A check ran but missed its tolerance.
pub const EXIT_FAIL: i32 = 1;
/// Malformed arguments, configuration or preconditions.
pub const EXIT_USAGE: i32 = 2;
/// Numerical evaluation failed.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] fueter_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Numerical(fueter_core::Error::Precondition(_)) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
