use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("operation not supported for {kind}: {op}")]
    Unsupported { op: &'static str, kind: String },

    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("element {0} does not belong to the group")]
    NotInGroup(String),

    #[error("predecessor of the empty word")]
    EmptyWord,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input is not mean-zero (coefficient at the identity is {0})")]
    NotMeanZero(String),

    #[error("basis vector {basis} does not belong to the {family} family")]
    FamilyMismatch { basis: String, family: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical sanity failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
