use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("cannot decode image {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("image is {width}x{height}, minimum is 64x64")]
    TooSmall { width: usize, height: usize },

    #[error("invalid singularity layout: {0}")]
    InvalidLayout(String),

    #[error("ridge synthesis covered {coverage:.3} of the mask after {iterations} iterations")]
    NonConvergence { coverage: f64, iterations: usize },

    #[error("margin {margin} leaves an empty mask on a {width}x{height} canvas")]
    MarginTooLarge { margin: usize, width: usize, height: usize },

    #[error("rolling angle {0} deg exceeds the 7 deg limit")]
    AngleOutOfRange(f64),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("deformation field is not smooth: neighbour step {step:.3} px exceeds {limit} px")]
    SmoothnessViolation { step: f64, limit: f64 },

    #[error("mask support is empty")]
    EmptySupport,

    #[error("tone amplitude {0} exceeds 0.3")]
    AmplitudeTooLarge(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("cannot write output {path}: {reason}")]
    OutputUnwritable { path: PathBuf, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("score list is empty")]
    EmptyScores,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn unwritable(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::OutputUnwritable {
            path: path.into(),
            reason: err.to_string(),
        }
    }
}

pub(crate) fn ensure_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
