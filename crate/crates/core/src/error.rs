use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (degenerate rectangle, point outside
    /// a domain, invalid exponent, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A field evaluator produced a non-finite value.
    #[error("evaluation error: field returned {value} at ({x}, {y})")]
    Evaluation { x: f64, y: f64, value: f64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
