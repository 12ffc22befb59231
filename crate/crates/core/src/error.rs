use thiserror::Error;

/// Errors raised by the numeric core (matrices, weights, triads, baselines,
/// aggregation).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("bad index ({i}, {j}) for a {h}x{h} matrix")]
    BadIndex { i: usize, j: usize, h: usize },
    #[error("bad judgment value {0}: must be a finite positive number")]
    BadValue(f64),
    #[error("bad scale: {0}")]
    BadScale(String),
    #[error("matrix is incomplete: pair ({i}, {j}) is unset")]
    IncompleteMatrix { i: usize, j: usize },
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("missing prerequisite judgment at ({i}, {j})")]
    MissingPrerequisite { i: usize, j: usize },
    #[error("malformed binary matrix: {0}")]
    MalformedMatrix(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("all preference intensities are 0 or 1; enable clamping")]
    DegenerateIntensities,
    #[error("confidence level {0} must lie in (0, 1)")]
    BadLevel(f64),
    #[error("no expert count up to {0} reaches the target half-width")]
    Unreachable(usize),
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
