use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuError {
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid table model: {0}")]
    InvalidTable(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("set is not upward closed: {0}")]
    NotUpwardClosed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a functional: {0}")]
    NotAFunctional(String),
}

pub type Result<T> = std::result::Result<T, CuError>;
