use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource limit: {what} requires dimension {dim}, cap is {cap}")]
    Resource { what: String, dim: usize, cap: usize },
    #[error("accuracy error: {reason} (bound {bound:e})")]
    Accuracy { reason: String, bound: f64 },
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
