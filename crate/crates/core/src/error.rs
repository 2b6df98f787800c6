use thiserror::Error;

/// Errors produced by the filling library.
#[derive(Debug, Error)]
pub enum FillError {
    /// The polygon failed ingest validation.
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    /// A query was made outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A filling solution violates its invariants (disc outside the shape, bad way, ...).
    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    /// The medial axis could not be assembled into a consistent tree.
    #[error("medial axis construction failed: {0}")]
    MedialAxis(String),

    /// Case-3 branches carry no continuum density.
    #[error("branch {0} is excluded from the continuum model")]
    ExcludedBranch(usize),

    /// Numerical failure inside an algorithm.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FillError>;
