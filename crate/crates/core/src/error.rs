use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the range where a formula or model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An explicit matrix does not describe a valid covariance.
    #[error("invalid covariance structure: {0}")]
    Structure(String),

    /// A factorization succeeded numerically but is too ill-conditioned to trust.
    #[error(
        "ill-conditioned matrix (condition estimate {estimate:.3e} exceeds {limit:.0e}): {context}"
    )]
    Conditioning {
        estimate: f64,
        limit: f64,
        context: String,
    },

    /// A matrix that must be invertible is singular, usually because p is too large.
    #[error("singular matrix: {0}")]
    Singularity(String),

    #[error("feature {index} has zero pooled variance")]
    DegenerateFeature { index: usize },

    #[error("delocalized calibration is not available for {0}")]
    UnsupportedCalibration(String),

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("replication {rep}: {source}")]
    Replication {
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{key}: {message}")]
    Config { key: String, message: String },

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Conditioning { .. } => true,
            Error::Replication { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
