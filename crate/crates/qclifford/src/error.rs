//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by exact-arithmetic and algebra operations.
///
/// Every fallible operation in the crate returns this type. Variants are
/// coarse on purpose: callers branch on *kind* (bad input vs. exact-division
/// failure vs. resource cap), while the message carries the specifics.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument was outside the documented domain of the operation
    /// (e.g. a generator index out of range, `N` too small, a forbidden
    /// evaluation point, or an automorphism datum violating its constraint).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Exact division by zero: inverting the zero scalar, specializing at a
    /// point where a denominator vanishes, or pivoting on a zero column where
    /// a nonzero pivot was required.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// An element expected to lie in a given span/ideal did not; the message
    /// carries the offending residual so the caller can report it.
    #[error("nonzero residual: {0}")]
    NonzeroResidual(String),

    /// A grading query on an element that mixes degrees.
    #[error("inhomogeneous element: {0}")]
    Inhomogeneous(String),

    /// A computation would exceed the configured materialization cap
    /// (see `QCLIFFORD_MAX_DIM`); rerun specialized or raise the cap.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
