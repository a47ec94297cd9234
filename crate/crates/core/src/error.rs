//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to meet its tolerance or bracket a root.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Too few complete dwells to form the requested statistic.
    #[error("insufficient statistics: {n1} state-1 and {n2} state-2 complete dwells ({context})")]
    InsufficientStatistics {
        n1: usize,
        n2: usize,
        context: String,
    },

    /// The dwell ratio equals the degeneracy ratio: the temperature diverges.
    #[error("temperature unidentifiable: {0}")]
    Unidentifiable(String),

    /// The ratio/gap combination implies a negative temperature.
    #[error("ratio implies negative temperature ({t_implied} K); ratio lies on the wrong side of the degeneracy asymptote")]
    NegativeTemperature { t_implied: f64 },

    /// An input file does not match its documented schema.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
