//! Truncated jets and `t`-dependent coefficient expressions.

pub mod expr;
pub mod jet;
pub mod parse;

use thiserror::Error;

pub use expr::{Expr, Func};
pub use jet::{Jet, JetOp};
pub use parse::{parse, ParseError};

/// A parsed coefficient function of `t`.
pub type TFunc = Expr;

/// Default number of derivatives carried when coefficients are evaluated.
pub const DEFAULT_ORDER: usize = 4;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum JetError {
    #[error("cannot shift a jet of order 0")]
    ShiftOfOrderZero,
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("{op} is undefined at {value}")]
    Domain { op: &'static str, value: f64 },
}

/// Evaluation failure, tagged with the innermost failing subexpression.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("in `{expr}`: {source}")]
pub struct EvalError {
    pub expr: String,
    pub source: JetError,
}
