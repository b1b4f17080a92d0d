use thiserror::Error;

/// Library error type.
///
/// Arithmetic on mismatched contexts is treated as a programming error and
/// panics in the hot path; every public entry point validates its inputs and
/// reports through this enum instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is not in the expected subgroup")]
    NotInSubgroup,
    #[error("degenerate pairing input: {0}")]
    DegeneratePair(String),
    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),
    #[error("net block degenerates at index {0}: division by a vanishing term")]
    DegenerateIndex(i64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
