//! Command line and HTTP front ends for cyclidic nets.

pub mod cli;
pub mod ops;
pub mod server;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable inputs, violated preconditions (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Some invariant suite failed (exit 1).
    #[error("validation failed")]
    Validation,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation => 1,
        }
    }
}

impl From<cyclidic::io::IoError> for CliError {
    fn from(e: cyclidic::io::IoError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<cyclidic::NetError> for CliError {
    fn from(e: cyclidic::NetError) -> Self {
        CliError::Usage(e.to_string())
    }
}
