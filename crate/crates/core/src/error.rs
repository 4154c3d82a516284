use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("series has a nonzero pole part")]
    PolePresent,

    #[error("insufficient precision: coefficient of order {order} is outside the known window (truncated above {trunc_order})")]
    InsufficientPrecision { order: i32, trunc_order: i32 },

    #[error("map does not send group-like key {0} to 1")]
    NotUnitOnGrouplike(String),

    #[error("degree-0 key {0} is not group-like")]
    StandingAssumption(String),

    #[error("coproduct of {0} does not respect the filtration")]
    FiltrationViolated(String),

    #[error("cover relations contain a cycle through {0}")]
    CycleDetected(String),

    #[error("unknown element {0}")]
    UnknownElement(String),

    #[error("key {0} is outside the enumerated range")]
    OutOfRange(String),

    #[error("arithmetic functions have different bounds ({0} vs {1})")]
    BoundMismatch(usize, usize),

    #[error("target algebra is not commutative")]
    NonCommutativeTarget,

    #[error("the unit of the target algebra is not in the kernel of R")]
    UnitNotInKerR,

    #[error("no character value assigned to tree {0}")]
    MissingAssignment(String),

    #[error("postcondition violated at {key}: {what}")]
    PostconditionViolated { key: String, what: String },
}
