//! Rational and Laurent expressions in `x0 .. x{n-1}` and their truncated
//! expansion at the origin.

mod ast;
mod expand;
mod multiseries;
mod parser;

use thiserror::Error;

pub use ast::RationalExpr;
pub use expand::{expand, expand_exact, expand_laurent};
pub use multiseries::{Exponent, MultiSeriesWire, Terms, TruncatedMultiSeries};
pub(crate) use multiseries::mul_terms;
pub use parser::parse_expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String>, found: String },
    #[error("variable x{index} at byte {position} is out of range for arity {arity}")]
    Arity { index: usize, arity: usize, position: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("denominator vanishes: {0}")]
    DenominatorVanishes(String),
    #[error("exponent cap must be non-negative")]
    CapNegative,
    #[error("expression is not a Laurent polynomial (division by a non-monomial)")]
    NotLaurentPolynomial,
    #[error("could not reach the requested window by widening the working box")]
    TruncationUnreachable,
}
