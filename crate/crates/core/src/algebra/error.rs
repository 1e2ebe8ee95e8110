use thiserror::Error;

use super::poly::MPoly;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("variable tables differ: {left:?} vs {right:?}")]
    TableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("not exactly divisible ({} remainder terms, leading: {})", .remainder.len(), .remainder.leading_display())]
    NotDivisible { remainder: MPoly },

    #[error("{0}")]
    Usage(String),
}

/// Parse failure with a 1-based position into the source text.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}
