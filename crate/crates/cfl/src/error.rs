use thiserror::Error;

#[derive(Debug, Error)]
pub enum CflError {
    #[error(transparent)]
    Core(#[from] cfl_core::Error),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("bit string has {found} bits, instance holds {expected}")]
    Capacity { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CflResult<T> = std::result::Result<T, CflError>;
