use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The regularized correlation matrix could not be factorized even at the
    /// largest jitter level.
    #[error(
        "ill-conditioned correlation matrix at theta={theta} (n={n}, jitter={jitter:e}, \
         min pairwise distance={min_pair_distance:e})"
    )]
    IllConditioned { theta: f64, n: usize, jitter: f64, min_pair_distance: f64 },

    #[error("objective returned a non-finite value {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
