//! Error type shared by all fallible operations in the crate.

use crate::parity::Parity;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by chart constructions, algebra operations and brackets.
///
/// Every variant describes a violated precondition; operations never return
/// mathematically wrong values silently.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Two operands live on different charts (distinct variable lists or
    /// conjugate-pair structure).
    #[error("operands live on different charts: {0}")]
    ChartMismatch(String),

    /// An argument was required to be parity-homogeneous of a particular
    /// parity but was not.
    #[error("parity mismatch in {context}: expected {expected:?}, found {found}")]
    ParityMismatch {
        context: &'static str,
        expected: Parity,
        found: String,
    },

    /// An argument had to be parity-homogeneous (either parity) but mixes
    /// even and odd terms.
    #[error("{context}: argument is not parity-homogeneous")]
    Inhomogeneous { context: &'static str },

    /// The chart lacks the conjugate-pair structure an operation needs
    /// (e.g. an even bracket invoked on a chart without even pairs).
    #[error("chart has no suitable conjugate pairs: {0}")]
    MissingPairs(String),

    /// The chart was not produced by the construction an operation expects
    /// (e.g. a fiber/momentum exchange applied to a chart that is not the
    /// cotangent of a bundle).
    #[error("chart has the wrong construction history: {0}")]
    WrongProvenance(String),

    /// A name, index, exponent or other input value is invalid.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal consistency check failed; indicates a bug in the engine.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
