//! Exact series arithmetic for diagonals of rational functions, Hadamard
//! products and hypergeometric series, together with the local ODE analysis
//! (Frobenius method at a regular singular point) that turns a truncated
//! series into a lower bound on its diagonal and Hadamard grade.
//!
//! Everything is exact: coefficients are [`Rational`]s and every series
//! carries the window through which its coefficients are known.
//!
//! Module map:
//!
//! * [`expr`]: parsing rational/Laurent expressions and expanding them as
//!   truncated multivariate series.
//! * [`series`]: univariate series, diagonals, Hadamard products, section
//!   operators, the `𝒟` map, constant-term series, algebraic series.
//! * [`hypergeom`]: hypergeometric coefficients, operators, resonance,
//!   contraction, height and Levelt Jordan structure.
//! * [`odelocal`]: differential operators, indicial data, Frobenius bases,
//!   nilpotence index and operator guessing.
//! * [`grade`]: grade bounds and representation witnesses.
//! * [`catalog`]: the worked examples with their independent oracles.
//!
//! With the default `parallel` feature the inner loops (sparse products,
//! series inversion, coefficientwise maps, guessing matrices) run on rayon;
//! without it the same code runs sequentially with identical results.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod grade;
pub mod hypergeom;
pub mod odelocal;
pub mod par;
pub mod poly;
pub mod rational;
pub mod series;
pub mod suite;

pub use error::Error;
pub use expr::{expand, expand_laurent, parse_expr, RationalExpr, TruncatedMultiSeries};
pub use poly::Poly;
pub use rational::Rational;
pub use series::UniSeries;
