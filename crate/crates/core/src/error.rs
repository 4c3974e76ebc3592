use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate point {0}")]
    DuplicatePoint(Point),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("empty point set")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coordinate {0} outside the supported range")]
    CoordinateOutOfRange(i64),

    #[error("oracle budget exceeded: {task} needs {size} points, limit is {limit}")]
    BudgetExceeded {
        task: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("sampling budget exhausted: {0}")]
    SamplingExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
