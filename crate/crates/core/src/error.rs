use thiserror::Error;

/// Errors produced by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported spin quantum number: {0}")]
    UnsupportedSpin(String),

    #[error("site index {index} out of range for a chain of {sites} sites")]
    SiteOutOfRange { index: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("field direction is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("𝒩 ⩾ 3 for non-trivial Bargmann phases (got {0} vertices)")]
    TooFewVertices(usize),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("state {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("dense solve refused: dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid coupling grid: {0}")]
    InvalidGrid(String),

    #[error("no usable samples: {0}")]
    EmptySamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;
