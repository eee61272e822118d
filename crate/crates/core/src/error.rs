use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarpError>;

#[derive(Debug, Error)]
pub enum HarpError {
    #[error("dimension mismatch: expected {expected} DOFs, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid workspace: {0}")]
    InvalidWorkspace(String),

    #[error("invalid robot model: {0}")]
    InvalidRobot(String),

    #[error("control out of bounds: v = {v}, steer = {steer}")]
    ControlOutOfBounds { v: f64, steer: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("no plans solved; corpus is empty ({attempted} queries attempted)")]
    EmptyCorpus { attempted: usize },

    #[error("critical region {0} has no samples")]
    EmptyRegion(usize),

    #[error("sample index is empty")]
    EmptyIndex,

    #[error("unknown abstract state {0}")]
    UnknownState(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("raster mismatch: {0}")]
    RasterMismatch(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarpError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarpError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        HarpError::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
