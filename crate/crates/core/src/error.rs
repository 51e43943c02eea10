use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested system is larger than the configured capacity.
    #[error("capacity error: N = {n} exceeds the limit of {cap} sites for {what}")]
    Capacity { n: usize, cap: usize, what: &'static str },

    /// Two inputs disagree on their dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A numerical routine produced something unusable.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The objective returned a non-finite value.
    #[error("objective returned {value} at x = {x:?}")]
    NonFinite { value: f64, x: Vec<f64> },

    /// A failure at one cell of a grid computation.
    #[error("at (delta = {delta}, alpha = {alpha}): {source}")]
    AtCell {
        delta: f64,
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    /// Malformed input file.
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_cell(self, delta: f64, alpha: f64) -> Self {
        Error::AtCell { delta, alpha, source: Box::new(self) }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
