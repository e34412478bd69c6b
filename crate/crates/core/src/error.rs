use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the sampling and training pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("index {index} out of range for {len} observations")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("gram matrix for {n} observations exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("{path}: row {row}, column {column}: cannot parse {value:?} as a real number")]
    ParseCell {
        path: PathBuf,
        row: usize,
        column: usize,
        value: String,
    },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("svdd solver did not converge after {iterations} pair updates (max KKT violation {violation:e})")]
    NotConverged { iterations: usize, violation: f64 },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Attributes an error to a pipeline stage.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
