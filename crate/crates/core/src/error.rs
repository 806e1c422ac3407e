use thiserror::Error;

use crate::polyparse::ParseError;

/// Errors raised by the library. Verdict-level outcomes (a point is not
/// Galois, a probe is inconclusive) are reported in result records, not here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error(
        "field {field} is too small: {needed}; smallest extension containing it: {suggestion}"
    )]
    FieldTooSmall {
        field: String,
        needed: String,
        suggestion: String,
    },

    #[error("operation requires positive characteristic, field is {0}")]
    CharacteristicZero(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different fields ({0} vs {1})")]
    FieldMismatch(String, String),

    #[error("singular transform (determinant is zero)")]
    SingularTransform,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("enumeration of {needed} points exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
