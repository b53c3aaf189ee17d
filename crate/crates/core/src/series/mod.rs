//! Univariate truncated series and the operators built on them: diagonals,
//! Hadamard products, section operators, the `𝒟` map, constant-term series
//! and algebraic series.

mod algebraic;
mod ops;
mod uni;

use thiserror::Error;

use crate::expr::ExprError;

pub use algebraic::{algebraic_series, binomial_power_series, AlgebraicSpec, BivariatePoly};
pub use ops::{
    constant_term_series, diagonal, dmap, hadamard, hadamard_all, recompose, section,
};
pub use uni::{UniSeries, UniSeriesWire};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation needs a power series (low = 0 in every variable)")]
    NotPowerSeries,
    #[error("window too small: need truncation order at least {needed}, have {have}")]
    WindowTooSmall { needed: usize, have: usize },
    #[error("residue {r} is out of range for modulus {m}")]
    ResidueOutOfRange { r: usize, m: usize },
    #[error("empty list of sections")]
    EmptyList,
    #[error("the map needs at least two variables, got {0}")]
    ArityTooSmall(usize),
    #[error("seed is inconsistent with the annihilating polynomial at order {order}")]
    SeedInconsistent { order: usize },
    #[error("continuation is singular at step {step}: the linear coefficient vanishes")]
    ContinuationSingular { step: usize },
    #[error("invalid series data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}
