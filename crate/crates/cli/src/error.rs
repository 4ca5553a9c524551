use cuntz_core::CuError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model: {0}")]
    Semantic(CuError),
    #[error("{0}")]
    Core(#[from] CuError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid report file: {0}")]
    Report(String),
    #[error("{0}")]
    Usage(String),
}
