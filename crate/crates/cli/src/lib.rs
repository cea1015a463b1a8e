//! Command-line front end for the `frio-coherence` library: single-point
//! reports, family and random sweeps to CSV, and the verification suite.

pub mod app;
pub mod config;
pub mod sweep;
pub mod table;
pub mod verify;

use std::path::{Path, PathBuf};

pub use app::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("output failed: {0}")]
    Output(String),
    #[error("{0}")]
    Evaluation(String),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Library errors raised while building inputs from user values.
    pub fn from_input(e: frio_coherence::Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Output(_) => EXIT_IO,
            CliError::Evaluation(_) | CliError::Verification => EXIT_VERIFY,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
