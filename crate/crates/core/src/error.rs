use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin 2j = {0} (supported range 1..=60)")]
    InvalidSpin(u32),

    #[error("zero state")]
    ZeroState,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("argument {0} outside the domain [-1, 1]")]
    Domain(f64),

    #[error("grid too coarse: n_theta = {n_theta}, need at least {required}")]
    UnderResolved { n_theta: usize, required: usize },

    #[error("negativity did not converge after {passes} refinements (last estimates {previous} and {last})")]
    NonConvergence {
        passes: usize,
        previous: f64,
        last: f64,
    },

    #[error("order M = {order} outside 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("unknown named state {0:?}")]
    UnknownState(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
