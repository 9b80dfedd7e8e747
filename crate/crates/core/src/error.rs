use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SandpileError {
    #[error("invalid shape K_{{{m},{n}}}: both parts need at least one vertex")]
    InvalidShape { m: usize, n: usize },
    #[error("length mismatch: expected {expected} values for {part}, got {got}")]
    LengthMismatch { part: &'static str, expected: usize, got: usize },
    #[error("partial configuration: the sink value is required here")]
    PartialConfiguration,
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("the sink cannot be part of a toppling set")]
    SinkInSet,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value {value} outside [0, {bound}]")]
    OutOfRange { value: i64, bound: usize },
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SandpileError>;

pub(crate) fn overflow(ctx: &'static str) -> SandpileError {
    SandpileError::Overflow(ctx)
}
