//! Error types.
//!
//! Two failure classes are kept strictly apart:
//!
//! * **precision loss** ([`Error::Precision`]) — a computation needed a digit
//!   or a component beyond the recorded truncation bound. This is a
//!   first-class outcome (verifiers surface it as `inconclusive`), never
//!   silently coerced to zero;
//! * **domain/cap violations** — invalid parameters, elements outside the
//!   domain of a partial operator (e.g. the inverse Cartier of something not
//!   in `Z_1`), or resource guards.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A digit beyond the truncation bound was needed.
    #[error("precision loss: {0}")]
    Precision(String),

    /// Parameters outside the supported caps.
    #[error("unsupported parameters: {0}")]
    Caps(String),

    /// Structure-polynomial table would exceed the resource guard.
    #[error("structure polynomial table too large: {0}")]
    TableTooLarge(String),

    /// Element outside the domain of a partial operator.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input (series, canonical form, CLI argument).
    #[error("parse error: {0}")]
    Parse(String),

    /// Cache file corruption or version mismatch.
    #[error("cache error: {0}")]
    Cache(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn caps(msg: impl Into<String>) -> Self {
        Error::Caps(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for failures that verifiers should report as `inconclusive`
    /// rather than `falsified`.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}
