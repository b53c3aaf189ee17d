use std::fmt;

use num_traits::{One, Signed};

use crate::rational::Rational;

/// Abstract syntax of a multivariate rational (or Laurent) expression.
///
/// Division keeps its denominator as a separate subtree; nothing is
/// simplified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalExpr {
    Const(Rational),
    Var(usize),
    Neg(Box<RationalExpr>),
    Add(Box<RationalExpr>, Box<RationalExpr>),
    Sub(Box<RationalExpr>, Box<RationalExpr>),
    Mul(Box<RationalExpr>, Box<RationalExpr>),
    Div(Box<RationalExpr>, Box<RationalExpr>),
    Pow(Box<RationalExpr>, i64),
}

impl RationalExpr {
    pub fn constant(c: Rational) -> Self {
        RationalExpr::Const(c)
    }

    pub fn int(n: i64) -> Self {
        RationalExpr::Const(Rational::from_integer(n.into()))
    }

    pub fn var(i: usize) -> Self {
        RationalExpr::Var(i)
    }

    pub fn add(a: Self, b: Self) -> Self {
        RationalExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Self, b: Self) -> Self {
        RationalExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Self, b: Self) -> Self {
        RationalExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Self, b: Self) -> Self {
        RationalExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Self, k: i64) -> Self {
        RationalExpr::Pow(Box::new(a), k)
    }

    pub fn neg(a: Self) -> Self {
        RationalExpr::Neg(Box::new(a))
    }

    /// Sum of the given terms, `0` when empty.
    pub fn sum(terms: impl IntoIterator<Item = Self>) -> Self {
        terms
            .into_iter()
            .reduce(RationalExpr::add)
            .unwrap_or_else(|| RationalExpr::int(0))
    }

    /// Product of the given factors, `1` when empty.
    pub fn product(factors: impl IntoIterator<Item = Self>) -> Self {
        factors
            .into_iter()
            .reduce(RationalExpr::mul)
            .unwrap_or_else(|| RationalExpr::int(1))
    }

    /// One more than the largest variable index used (0 for constants).
    pub fn min_arity(&self) -> usize {
        match self {
            RationalExpr::Const(_) => 0,
            RationalExpr::Var(i) => i + 1,
            RationalExpr::Neg(a) | RationalExpr::Pow(a, _) => a.min_arity(),
            RationalExpr::Add(a, b)
            | RationalExpr::Sub(a, b)
            | RationalExpr::Mul(a, b)
            | RationalExpr::Div(a, b) => a.min_arity().max(b.min_arity()),
        }
    }

    fn is_plain_literal(&self) -> bool {
        matches!(self, RationalExpr::Const(c) if !c.is_negative())
    }

    fn is_integer_literal(&self) -> bool {
        matches!(self, RationalExpr::Const(c) if !c.is_negative() && c.denom().is_one())
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        let (open, close) = if top { ("", "") } else { ("(", ")") };
        match self {
            RationalExpr::Const(c) => {
                if c.is_negative() {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            RationalExpr::Var(i) => write!(f, "x{i}"),
            RationalExpr::Neg(a) => {
                f.write_str(open)?;
                f.write_str("-(")?;
                a.write(f, true)?;
                f.write_str(")")?;
                f.write_str(close)
            }
            RationalExpr::Add(a, b) => self.write_binary(f, top, a, " + ", b),
            RationalExpr::Sub(a, b) => self.write_binary(f, top, a, " - ", b),
            RationalExpr::Mul(a, b) => self.write_binary(f, top, a, "*", b),
            RationalExpr::Div(a, b) => {
                f.write_str(open)?;
                a.write(f, false)?;
                f.write_str("/")?;
                // `3/4` would re-read as one literal, so shield a literal
                // denominator that follows a literal numerator.
                if a.is_plain_literal() && b.is_plain_literal() {
                    f.write_str("(")?;
                    b.write(f, true)?;
                    f.write_str(")")?;
                } else {
                    b.write(f, false)?;
                }
                f.write_str(close)
            }
            RationalExpr::Pow(a, k) => {
                if matches!(**a, RationalExpr::Var(_)) || a.is_integer_literal() {
                    a.write(f, false)?;
                } else {
                    f.write_str("(")?;
                    a.write(f, true)?;
                    f.write_str(")")?;
                }
                write!(f, "^{k}")
            }
        }
    }

    fn write_binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        top: bool,
        a: &RationalExpr,
        op: &str,
        b: &RationalExpr,
    ) -> fmt::Result {
        if !top {
            f.write_str("(")?;
        }
        a.write(f, false)?;
        f.write_str(op)?;
        b.write(f, false)?;
        if !top {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, true)
    }
}

impl From<Rational> for RationalExpr {
    fn from(c: Rational) -> Self {
        RationalExpr::Const(c)
    }
}
