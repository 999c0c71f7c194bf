use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dimension(expected: usize, got: usize, what: &str) -> Self {
        Error::Dimension(format!("{what}: expected length {expected}, got {got}"))
    }
}
