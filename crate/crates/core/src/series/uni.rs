use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SeriesError;
use crate::par;
use crate::rational::{int, Rational};

/// Power series known through `x^trunc`.
///
/// Always holds exactly `trunc + 1` coefficients. Derived equality is
/// structural; use [`UniSeries::agrees_with`] to compare on the common
/// window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    /// Panics if `coeffs` is empty: every series knows at least `x^0`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        UniSeries { coeffs }
    }

    pub fn from_fn(trunc: usize, f: impl Fn(usize) -> Rational + Sync + Send) -> Self {
        UniSeries::new(par::map_range(trunc + 1, f))
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniSeries::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(trunc: usize) -> Self {
        UniSeries::new(vec![Rational::zero(); trunc + 1])
    }

    /// `1 + 0x + ...`
    pub fn one(trunc: usize) -> Self {
        let mut s = UniSeries::zero(trunc);
        s.coeffs[0] = Rational::one();
        s
    }

    /// `1/(1-x)`
    pub fn geometric(trunc: usize) -> Self {
        UniSeries::new(vec![Rational::one(); trunc + 1])
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i`; `None` beyond the window.
    pub fn coeff(&self, i: usize) -> Option<&Rational> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Restricts to `x^0 ..= x^n` (no-op when `n >= trunc`).
    pub fn truncate(&self, n: usize) -> Self {
        UniSeries::new(self.coeffs[..=n.min(self.trunc())].to_vec())
    }

    /// Equality on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }

    /// First index in the common window where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        UniSeries::new((0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        UniSeries::new((0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Cauchy product on the common window.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        UniSeries::from_fn(n, |k| {
            let mut s = Rational::zero();
            for i in 0..=k {
                s += &self.coeffs[i] * &other.coeffs[k - i];
            }
            s
        })
    }

    /// Multiplication by `x^k`; the window grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniSeries::new(coeffs)
    }

    /// Formal derivative; the window shrinks by one (stays at 0 for a
    /// constant window).
    pub fn derivative(&self) -> Self {
        if self.trunc() == 0 {
            return UniSeries::zero(0);
        }
        UniSeries::new(
            (1..=self.trunc())
                .map(|i| &self.coeffs[i] * int(i as i64))
                .collect(),
        )
    }

    pub fn to_wire(&self) -> UniSeriesWire {
        UniSeriesWire {
            trunc: self.trunc(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_wire(w: &UniSeriesWire) -> Result<Self, SeriesError> {
        if w.coeffs.len() != w.trunc + 1 {
            return Err(SeriesError::Invalid(format!(
                "trunc {} needs {} coefficients, found {}",
                w.trunc,
                w.trunc + 1,
                w.coeffs.len()
            )));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| crate::rational::parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| SeriesError::Invalid(e.to_string()))?;
        Ok(UniSeries::new(coeffs))
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}] + O(x^{})", body.join(", "), self.trunc() + 1)
    }
}

/// JSON form: `{"trunc": N, "coeffs": ["p/q", ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct UniSeriesWire {
    pub trunc: usize,
    pub coeffs: Vec<String>,
}

impl Serialize for UniSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = UniSeriesWire::deserialize(d)?;
        UniSeries::from_wire(&w).map_err(serde::de::Error::custom)
    }
}
