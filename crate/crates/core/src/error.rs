use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation failed: {invariant} (deviation {deviation:.3e})")]
    Validation { invariant: String, deviation: f64 },

    #[error("unsupported dimension {dim}; supported: {supported:?}")]
    UnsupportedDimension { dim: usize, supported: Vec<usize> },

    #[error("finite field error: {0}")]
    Field(String),

    #[error("bound not established: {0}")]
    NotEstablished(String),

    #[error("incomplete model: {0}")]
    IncompleteModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(invariant: impl Into<String>, deviation: f64) -> Self {
        Error::Validation {
            invariant: invariant.into(),
            deviation,
        }
    }
}
