use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the test pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid data matrix: {0}")]
    InvalidData(String),

    #[error("invalid scaling: {0}")]
    InvalidScaling(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel overflow: ({base})^{degree} is not representable as f64")]
    KernelOverflow { base: f64, degree: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid group labels: {0}")]
    InvalidLabels(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
