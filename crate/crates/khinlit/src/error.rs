//! Error type shared by the whole crate.

use alloc::string::String;

/// Errors reported by library operations.
///
/// The split mirrors how callers are expected to react: domain and usage
/// errors mean the request itself is invalid, numeric errors mean an
/// algorithm failed to converge, and resource errors mean an enumeration
/// would exceed the configured budget.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation was called with structurally invalid inputs
    /// (shape mismatch, wrong constant family, malformed permutation).
    #[error("usage error: {0}")]
    Usage(String),
    /// A numerical procedure failed (bracket without a sign change,
    /// quadrature that did not reach the requested tolerance).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// The request is valid but outside the supported exact modes.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An exhaustive enumeration would exceed the evaluation budget.
    #[error("resource limit: enumeration needs {required} evaluations, budget is {budget}")]
    Resource { required: u128, budget: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;
