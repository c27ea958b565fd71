use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: field `{field}`: {message}")]
    Field { line: usize, field: String, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("program has {pairs} pairs; the grid oracle accepts at most {max}")]
    ProgramTooLarge { pairs: usize, max: usize },

    #[error("assignment violates simplex of pair {pair} (sum {sum})")]
    Infeasible { pair: String, sum: f64 },

    #[error("solver produced a non-finite iterate at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("sweep config #{index} failed: {source}")]
    Sweep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn field(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field { line, field: field.into(), message: message.into() }
    }

    /// True for errors caused by the caller's inputs, as opposed to internal failures.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::Field { .. }
            | Error::Invalid(_)
            | Error::Config(_)
            | Error::ProgramTooLarge { .. } => true,
            Error::Sweep { source, .. } => source.is_validation(),
            Error::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            Error::Infeasible { .. } | Error::NonFinite { .. } => false,
        }
    }
}
