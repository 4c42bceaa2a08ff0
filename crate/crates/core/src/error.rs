use thiserror::Error;

use crate::ordinal::OrdinalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid gamma selector: {0}")]
    InvalidGamma(String),
    #[error("invalid largeness notion: {0}")]
    InvalidNotion(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing value: {0}")]
    Missing(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
