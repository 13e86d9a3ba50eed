//! Command-line front end for `cavity-bell`.
//!
//! Subcommands: `table1`, `fig1`, `fig2`, `correlate`, `scan`. Results go to
//! CSV (or TSV) on standard output or `--out`; curves can also be drawn as a
//! small SVG with `--plot`.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::process::ExitCode;

pub use args::{Cli, Command};

/// Failures mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Config { path: String, line: usize, message: String },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] cavity_bell::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Core(_) => 1,
            CliError::Config { .. } => 2,
            CliError::Consistency(_) => 3,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
