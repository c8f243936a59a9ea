use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    LimitExceeded { what: &'static str, value: usize, limit: usize },

    #[error("trial budget of {budget} exhausted before an accepted sample")]
    Exhausted { budget: u64 },

    /// A checked statement failed. Either a bug or a genuine small-n deviation.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
