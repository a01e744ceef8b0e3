use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid multidegree: {0}")]
    InvalidMultidegree(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no closed path in quiver")]
    NoClosedPath,
    #[error("inconclusive after {states} states: {reason}")]
    Inconclusive { states: usize, reason: String },
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("property violated: {0}")]
    Violation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. } | Error::CapExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
