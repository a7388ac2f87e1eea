use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or incomplete configuration (dimensions, lengths, fields).
    #[error("configuration error: {0}")]
    Config(String),

    /// A matrix or vector dimension does not match what the operation needs.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: String,
    },

    /// The integrand produced a NaN or infinite value.
    #[error("integrand evaluated to a non-finite value at {abscissa:e}")]
    Evaluation { abscissa: f64 },

    /// Wrong covariance branch for the supplied separation D.
    #[error("branch error: {0}")]
    Branch(String),

    /// A precondition on the inputs (normalization, commutation, ...) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A covariance matrix that cannot describe a physical state.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Requested abscissa outside a tabulated profile or alpha table.
    #[error("interpolation error: {0}")]
    Interpolation(String),

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {what}: {message}")]
    Parse { what: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            what: what.into(),
            message: message.to_string(),
        }
    }
}
