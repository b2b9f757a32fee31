//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by operators, samplers, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Vector or matrix dimensions do not line up.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A linear-algebra routine failed (singular system, non-convergent SVD).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A NaN or infinity appeared mid-run; names the sampler step.
    #[error("non-finite value in {what} at cycle {cycle}, t={t}, inner step {inner}")]
    NonFinite {
        what: String,
        cycle: usize,
        t: usize,
        inner: usize,
    },

    /// The PCGS trimming validator detected a stale conditional variable.
    #[error("trimming violation: {0}")]
    TrimmingViolation(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks a slice length against an expected dimension.
pub(crate) fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        });
    }
    Ok(())
}
