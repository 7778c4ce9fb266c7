use thiserror::Error;

/// Top-level failure, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration.
    #[error("usage: {0}")]
    Usage(String),
    /// Unreadable or malformed inputs, failed computations, or outputs
    /// that fail self-validation.
    #[error(transparent)]
    Data(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl From<dqpt_core::Error> for CliError {
    fn from(e: dqpt_core::Error) -> Self {
        CliError::Data(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
