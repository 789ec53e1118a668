use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("{0}")]
    Domain(String),

    #[error("{what} needs {required} but the budget allows {limit}{hint}")]
    Budget {
        what: &'static str,
        required: u128,
        limit: u128,
        hint: &'static str,
    },

    #[error("not a Hadamard matrix: {kind}s {a} and {b} have inner product {product}")]
    NotHadamard {
        kind: &'static str,
        a: usize,
        b: usize,
        product: i64,
    },

    #[error("order {order} has no implemented construction (implemented: {implemented})")]
    UnsupportedOrder { order: usize, implemented: String },

    #[error("vector {index} lies outside the unit ball (norm {norm})")]
    OutsideUnitBall { index: usize, norm: String },

    #[error("{0} has no exact representation; evaluate in floating point")]
    Inexact(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("checkpoint was written for {found}, this run is {expected}")]
    ConfigMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
