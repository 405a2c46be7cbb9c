use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A guarded resource (enumeration size, DP table) would exceed its cap.
    #[error("capacity exceeded: {what} needs {requested}, limit is {limit}")]
    CapacityExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// Total weight fits in the knapsack, so `x = 1^n` is optimal and no bias is defined.
    #[error("trivial instance: all items fit (sum of weights <= capacity)")]
    TrivialInstance,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
