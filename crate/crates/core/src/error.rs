use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {field}: {message}")]
    InvalidInstance { field: String, message: String },

    #[error("malformed document at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown processor index {0}")]
    UnknownProcessor(usize),

    #[error("task {0} appears more than once in the processor orders")]
    DuplicateTask(String),

    #[error("task {0} is not assigned to any processor")]
    UnassignedTask(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInstance {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
