use std::fmt;

use qdiscord_core::QError;

/// Failure modes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or an unreadable / malformed input file (exit 2).
    Input(String),
    /// Input parsed but violates a state or gate invariant (exit 3).
    Invalid(QError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Invalid(e) => write!(f, "invalid input: {e}"),
        }
    }
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        CliError::Invalid(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
