use navol_core::CoreError;
use thiserror::Error;

/// Failure classes of a run, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid instance file.
    #[error("{0}")]
    Parse(String),

    /// The instance is valid but the requested computation does not apply.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) | CliError::Output(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
