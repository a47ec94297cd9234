//! Command implementations behind the `rts-thermo` binary, exposed as a
//! library so integration tests can drive them in-process.

pub mod commands;
pub mod config;

use thiserror::Error;

/// Errors carrying their process exit code: 1 validation, 2 I/O, 3 numerics.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<rts_thermo::Error> for CliError {
    fn from(e: rts_thermo::Error) -> Self {
        use rts_thermo::Error as E;
        match e {
            E::Domain(m) => CliError::Validation(m),
            E::Io(err) => CliError::Io(err.to_string()),
            E::Parse { .. } => CliError::Io(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
