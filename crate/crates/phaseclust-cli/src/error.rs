//! CLI error type with the exit-code contract: schema violations exit with
//! code 2, computation and I/O failures with code 1.

use std::path::Path;

use thiserror::Error;

/// Anything that aborts a CLI run.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration (file or flags) violates the schema. The message
    /// names the offending field.
    #[error("configuration error: {0}")]
    Schema(String),

    /// A computation, input artifact, or output write failed.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// Process exit code mandated for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<phaseclust::Error> for CliError {
    fn from(e: phaseclust::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Shorthand for a schema violation naming the offending field.
pub fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Shorthand for a runtime failure.
pub fn runtime(msg: impl Into<String>) -> CliError {
    CliError::Runtime(msg.into())
}

/// Wrap an I/O error with the path it concerns.
pub fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

pub type Result<T> = std::result::Result<T, CliError>;
