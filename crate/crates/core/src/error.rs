use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed value handed to a constructor or operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive routine was asked to enumerate more than it is built for.
    #[error("{what}: capped at {cap}, got {got}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    /// Parameters that violate a documented feasibility condition.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// Subset enumeration would exceed the configured cap.
    #[error("enumeration needs {needed} subsets, cap is {cap}")]
    EnumerationCap { cap: u64, needed: u64 },

    /// The encoder flagged this block as failed; the bit is an erasure.
    #[error("block encoding failed; bit unavailable")]
    EncodingFailed,

    /// Every verification guess down to t = 1 was rejected.
    #[error("oracle rejected every guess down to t = 1")]
    InconsistentOracle,

    /// Text formats (edge lists, config files, oracle specs).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
