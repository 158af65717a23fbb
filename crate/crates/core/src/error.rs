use thiserror::Error;

/// Errors raised by the library. Each variant maps to one reporting category.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("size limit exceeded: {0}")]
    CapExceeded(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Infeasible(_) => "infeasible",
            Error::Numeric(_) => "numeric",
            Error::CapExceeded(_) => "cap-exceeded",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
