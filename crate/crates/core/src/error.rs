use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the detection and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size {width}x{height}: both dimensions must be at least {min}")]
    InvalidSize { width: usize, height: usize, min: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("histogram length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("coincident feature points cannot define a bisector")]
    CoincidentPoints,

    #[error("no non-homogeneous cells: the image has no edge features")]
    NoFeatures,

    #[error("no symmetry evidence: all pair weights are zero")]
    NoSymmetryEvidence,

    #[error("peak has no associated voters")]
    NoVoters,

    #[error("degenerate axis segment (zero length)")]
    DegenerateSegment,

    #[error("groundtruth set is empty")]
    EmptyGroundTruth,

    #[error("unknown threshold regime `{0}`")]
    UnknownRegime(String),

    #[error("unknown groundtruth dialect `{0}`")]
    UnknownDialect(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("image id `{0}` has no groundtruth record")]
    MissingGroundTruth(String),

    #[error("image id `{0}` has no recorded image size")]
    MissingImageSize(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
