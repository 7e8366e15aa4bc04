use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by `hcc-core`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("gamma level {0} out of range (expected 1..=6)")]
    GammaLevel(u8),

    #[error("invalid design structure matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("objective returned non-finite value {value} after {fes} evaluations")]
    NonFinite { value: f64, fes: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance file truncated: missing section `{section}`")]
    TruncatedInstance { section: String },

    #[error("instance file is missing section `{section}`")]
    MissingSection { section: String },

    #[error("unsupported instance format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("malformed {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Parse {
            what,
            detail: detail.into(),
        }
    }
}
