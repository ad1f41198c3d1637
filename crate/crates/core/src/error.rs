use thiserror::Error;

/// Errors raised by group construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// Malformed or inconsistent input (mixed degrees, singular matrix, bad parameter).
    #[error("input error: {0}")]
    Input(String),
    /// An operation was called on data that violates its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A configured cap would be exceeded.
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: &'static str,
        cap: u64,
        needed: u64,
    },
    /// A bounded search finished without finding the requested object.
    #[error("not found: {0}")]
    NotFound(String),
    /// An invariant that presupposes solvability was requested for a non-solvable group.
    #[error("group is not solvable")]
    NotSolvable,
    /// Text input could not be parsed.
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, GroupError>;

pub(crate) fn input(msg: impl Into<String>) -> GroupError {
    GroupError::Input(msg.into())
}
