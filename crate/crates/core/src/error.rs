use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("point set must be nonempty")]
    EmptySet,
    #[error("point index {index} out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected} points, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not a metric: {0}")]
    NotAMetric(String),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance is missing {0}")]
    MissingComponent(&'static str),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("mutation not applicable: {0}")]
    MutationSkipped(String),
}
