//! Command-line driver for the `ramaniton` simulator.
//!
//! The binary is a thin sequential shell: parse flags, resolve parameters
//! (flag > config file > preset), call the library, render CSV/JSON with a
//! fixed 12-significant-digit format. All parallelism lives inside the
//! library's grid evaluators and never affects output bytes.
//!
//! Exit codes: 0 success; 2 usage or configuration error; 3 verification
//! failure (inadequate Fock truncation, oracle agreement gate); 1 any other
//! runtime failure.

pub mod cli;
pub mod config;
pub mod grid;
pub mod output;

pub use cli::{execute, Cli};

/// A failed invocation, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, malformed config, or out-of-domain parameters (exit 2).
    #[error("{0}")]
    Config(String),
    /// A verification gate failed (exit 3).
    #[error("{0}")]
    Verification(String),
    /// Any other runtime failure (exit 1).
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// The process exit code this error class maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<ramaniton::Error> for CliError {
    fn from(e: ramaniton::Error) -> Self {
        match e {
            ramaniton::Error::InvalidParams(_) => CliError::Config(e.to_string()),
            ramaniton::Error::TruncationInadequate(_) => CliError::Verification(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
