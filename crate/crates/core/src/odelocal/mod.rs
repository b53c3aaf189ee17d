//! Linear differential operators with polynomial coefficients and their
//! local analysis at `x = 0`.
//!
//! Operators are kept either in θ-form `Σ p_i(x) θ^i` with `θ = x d/dx`, or
//! in d/dx-form `Σ a_i(x) D^i`. The nilpotence index is read off a Frobenius
//! basis: it is one more than the largest power of `log x` that occurs.

mod frobenius;
mod guess;
mod indicial;
pub(crate) mod linalg;
mod op;

use thiserror::Error;

pub use frobenius::{frobenius_basis, nil_index, nil_index_with_window, FormalSolution, NilReport};
pub use guess::{guess_operator, GUARD};
pub use indicial::{indicial, rational_roots, Indicial};
pub use op::{DiffOp, DiffOpWire, OpForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdeError {
    #[error("the zero operator is not allowed")]
    ZeroOperator,
    #[error("window too small: need truncation order at least {needed}, have {have}")]
    WindowTooSmall { needed: usize, have: usize },
    #[error("operator is not regular singular at 0")]
    IrregularSingular,
    #[error("indicial polynomial has non-rational roots (unresolved factor {0})")]
    IrrationalExponent(String),
    #[error("invalid operator data: {0}")]
    Invalid(String),
}
