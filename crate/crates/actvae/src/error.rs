//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("corrupt file: {0}")]
    Corrupt(String),

    #[error("unsupported checkpoint format version {found} (this build reads version {supported})")]
    VersionMismatch { found: u32, supported: u32 },

    #[error("non-finite gradient in parameter `{param}` at flat index {index}")]
    NonFiniteGradient { param: String, index: usize },

    #[error("loss became non-finite at step {step} (epoch {epoch}, batch of {batch_size} starting with tuple `{first_tuple}`)")]
    NanLoss {
        step: u64,
        epoch: usize,
        batch_size: usize,
        first_tuple: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
