use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("population too small: need at least {min}, got {got}")]
    PopulationTooSmall { min: usize, got: usize },

    #[error("sample too small: need at least {min} values, got {got}")]
    SampleTooSmall { min: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("unknown algorithm id `{0}`")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
