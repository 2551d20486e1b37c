use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular system")]
    Singular,
    #[error("not in domain: {0}")]
    NotInDomain(String),
    #[error("search budget of {0} seeds exhausted")]
    BudgetExhausted(usize),
    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
