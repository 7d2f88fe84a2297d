use thiserror::Error;

/// Errors raised by net construction and its supporting geometry.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line} passes through point {point} of the point set")]
    LineThroughPoint { line: usize, point: usize },

    #[error("no verified cutting sample found after {attempts} attempts (r = {r}, threshold = {threshold})")]
    CuttingNotFound {
        attempts: usize,
        r: usize,
        threshold: u64,
    },

    #[error("no verified strong triangle net found after {attempts} attempts (sample size {sample_size})")]
    NetNotFound { attempts: usize, sample_size: usize },

    #[error("general-position perturbation failed: {reason}")]
    PerturbationFailed { reason: String },

    #[error("operation needs at least one point")]
    TooFewPoints,

    #[error("instance too large for exhaustive enumeration: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
