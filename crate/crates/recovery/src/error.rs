use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Projection(#[from] sepsparse::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, RecoveryError>;
