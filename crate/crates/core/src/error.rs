use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured size or search budget would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Malformed text input (edge lists, vertex sets).
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// An internal consistency check failed. Seeing this means a construction is wrong.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
