//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by graph construction, dynamics, set computations,
/// probability routines and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error(
        "gap with twice-delta {twice_delta} is incompatible with n = {n}: n/2 +- delta must be nonnegative integers"
    )]
    IncompatibleGap { n: usize, twice_delta: u64 },

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("focal vertices must be distinct (got {0} twice)")]
    SameVertex(usize),

    #[error("focal vertex {0} does not have color 1")]
    NotColorOne(usize),

    #[error("focal vertices {0} and {1} are adjacent")]
    AdjacentFocalPair(usize, usize),

    #[error("n*p = {0} must exceed 1 for the default day cap")]
    Subcritical(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact enumeration limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON failure: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV failure: {0}")]
    Csv(#[from] csv::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
