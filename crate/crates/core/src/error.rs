use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlameError {
    /// Malformed edge-list input; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation was called outside its domain (bad vertex, edge not in
    /// the graph, violated precondition).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exponential check refused to run because the in-degree cap was
    /// exceeded.
    #[error("cap exceeded: {what} is {actual}, cap is {cap}")]
    CapExceeded {
        what: String,
        actual: usize,
        cap: usize,
    },

    /// A result that a theorem guarantees could not be produced or verified.
    /// This always indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl FlameError {
    pub fn domain(msg: impl Into<String>) -> Self {
        FlameError::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        FlameError::Internal(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, actual: usize, cap: usize) -> Self {
        FlameError::CapExceeded {
            what: what.into(),
            actual,
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, FlameError>;
