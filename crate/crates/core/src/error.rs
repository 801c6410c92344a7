use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("lag exceeds sample: lag {lag} with {len} observations")]
    LagExceedsSample { lag: usize, len: usize },

    #[error("profile too short: lag {lag} requested, profile holds lags 0..={max_lag}")]
    ProfileTooShort { lag: usize, max_lag: usize },

    #[error("split {split} outside 1..{len}")]
    InvalidSplit { split: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
