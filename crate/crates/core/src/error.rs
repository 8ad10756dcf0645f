use std::fmt;

use thiserror::Error;

/// Which side of a context an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Object,
    Attribute,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Object => f.write_str("object"),
            Side::Attribute => f.write_str("attribute"),
        }
    }
}

#[derive(Debug, Error)]
pub enum FcaError {
    #[error("{side} index {index} out of range (count {bound})")]
    IndexOutOfRange { side: Side, index: usize, bound: usize },

    #[error("word width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u32, right: u32 },

    #[error("unsupported word width {0} (expected 32 or 64)")]
    InvalidWidth(u32),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("local queue budget of {budget} bytes exhausted at recursion depth {depth} after {concepts} concepts")]
    BudgetExhausted { budget: u64, depth: usize, concepts: usize },

    #[error("extent arena allocation failed after {concepts} concepts")]
    Allocation { concepts: usize },

    #[error("brute-force oracle refuses a {objects}x{attributes} context (smaller side must be at most {limit})")]
    OracleTooLarge { objects: usize, attributes: usize, limit: usize },

    #[error("duplicate intent in concept set: {0:?}")]
    DuplicateIntent(Vec<u32>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FcaError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        FcaError::Parse { line, message: message.into() }
    }
}

pub type Result<T, E = FcaError> = std::result::Result<T, E>;
