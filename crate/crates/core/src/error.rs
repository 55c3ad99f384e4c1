use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of an algorithm does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Unsupported or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed edge-list input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A computation would exceed a size budget (e.g. dense eigensolves).
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A randomized construction did not meet its acceptance test.
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
