//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by entkit operations.
#[derive(Debug, Error)]
pub enum EntKitError {
    /// A mode structure was malformed (empty, or a mode size < 2).
    #[error("invalid mode structure: {0}")]
    InvalidStructure(String),

    /// A level or multi-index component was outside its valid range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// An argument violated a precondition (dimension mismatch, bad angle
    /// range, duplicate levels, …).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input failed numerical validation (non-normalized state,
    /// non-Hermitian matrix, non-unitary operator, …).
    #[error("validation failed: {0}")]
    Validation(String),

    /// The operation is undefined for this structure (e.g. the ent of a
    /// single-mode system).
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    /// A convex-roof request exceeded the supported mixed-state rank.
    #[error("unsupported rank {rank}: exact-grid roof search handles rank ≤ {max}")]
    UnsupportedRank { rank: usize, max: usize },

    /// A combinatorial search would exceed the configured resource cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// An internal guarantee was violated; this is a defect, not a user error.
    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),

    /// A requested aggregate is undefined because some cells could not be
    /// computed (e.g. a roof beyond the supported rank).
    #[error("value unavailable: {0}")]
    Unavailable(String),

    /// File I/O failure while reading or writing state files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a state file or report.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, EntKitError>;
