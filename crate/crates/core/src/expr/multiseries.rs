use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ExprError;
use crate::par;
use crate::rational::{parse_rational, Rational};

pub type Exponent = Vec<i64>;
pub type Terms = BTreeMap<Exponent, Rational>;

/// A multivariate series known exactly on the box `low ..= cap`.
///
/// Coefficients outside the box are unknown (above `cap`) or zero (below
/// `low`). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMultiSeries {
    low: Vec<i64>,
    cap: Vec<i64>,
    terms: Terms,
}

impl TruncatedMultiSeries {
    /// Builds a series, dropping zeros and anything outside the box.
    pub fn new(low: Vec<i64>, cap: Vec<i64>, terms: Terms) -> Result<Self, ExprError> {
        if low.len() != cap.len() {
            return Err(ExprError::ArityMismatch { expected: low.len(), found: cap.len() });
        }
        if low.iter().any(|&l| l > 0) {
            return Err(ExprError::InvalidWindow("low bounds must be <= 0".into()));
        }
        for e in terms.keys() {
            if e.len() != low.len() {
                return Err(ExprError::ArityMismatch { expected: low.len(), found: e.len() });
            }
        }
        let mut s = TruncatedMultiSeries { low, cap, terms };
        s.clean();
        Ok(s)
    }

    pub(crate) fn from_parts_unchecked(low: Vec<i64>, cap: Vec<i64>, terms: Terms) -> Self {
        let mut s = TruncatedMultiSeries { low, cap, terms };
        s.clean();
        s
    }

    /// Power series (`low = 0`) with the same cap in every variable.
    pub fn with_uniform_cap(arity: usize, cap: i64, terms: Terms) -> Result<Self, ExprError> {
        Self::new(vec![0; arity], vec![cap; arity], terms)
    }

    fn clean(&mut self) {
        let (low, cap) = (&self.low, &self.cap);
        self.terms.retain(|e, c| {
            !c.is_zero() && e.iter().zip(low).all(|(x, l)| x >= l) && e.iter().zip(cap).all(|(x, u)| x <= u)
        });
    }

    pub fn arity(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[i64] {
        &self.low
    }

    pub fn cap(&self) -> &[i64] {
        &self.cap
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_power_series(&self) -> bool {
        self.low.iter().all(|&l| l == 0)
    }

    /// Coefficient at `e`; `None` if `e` lies above the known window.
    pub fn coeff(&self, e: &[i64]) -> Option<Rational> {
        if e.len() != self.arity() || e.iter().zip(&self.cap).any(|(x, u)| x > u) {
            return None;
        }
        Some(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    fn check_arity(&self, other: &Self) -> Result<(), ExprError> {
        if self.arity() != other.arity() {
            return Err(ExprError::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_arity(other)?;
        let low = zip_with(&self.low, &other.low, i64::min);
        let cap = zip_with(&self.cap, &other.cap, i64::min);
        let mut terms = self.terms.clone();
        add_into(&mut terms, &other.terms, &Rational::from_integer(1.into()));
        Ok(Self::from_parts_unchecked(low, cap, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_arity(other)?;
        let low = zip_with(&self.low, &other.low, i64::min);
        let cap = zip_with(&self.cap, &other.cap, i64::min);
        let mut terms = self.terms.clone();
        add_into(&mut terms, &other.terms, &Rational::from_integer((-1).into()));
        Ok(Self::from_parts_unchecked(low, cap, terms))
    }

    /// Truncated product. The result is sound on
    /// `cap_i = min(cap_a_i + low_b_i, cap_b_i + low_a_i)`.
    pub fn mul(&self, other: &Self) -> Result<Self, ExprError> {
        self.check_arity(other)?;
        let low = zip_with(&self.low, &other.low, |a, b| a + b);
        let cap: Vec<i64> = (0..self.arity())
            .map(|i| (self.cap[i] + other.low[i]).min(other.cap[i] + self.low[i]))
            .collect();
        let terms = mul_terms(&self.terms, &other.terms, Some(&cap));
        Ok(Self::from_parts_unchecked(low, cap, terms))
    }

    /// Restricts the known window to `cap` (componentwise minimum).
    pub fn truncate(&self, cap: &[i64]) -> Self {
        let cap = zip_with(&self.cap, cap, i64::min);
        Self::from_parts_unchecked(self.low.clone(), cap, self.terms.clone())
    }

    /// Places this series on variables `offset .. offset + arity` of a
    /// series in `arity_out` variables. The other variables get cap
    /// `other_cap` (the series is constant in them, so any cap is sound).
    pub fn embed(&self, arity_out: usize, offset: usize, other_cap: i64) -> Result<Self, ExprError> {
        if offset + self.arity() > arity_out {
            return Err(ExprError::ArityMismatch { expected: arity_out, found: offset + self.arity() });
        }
        let mut low = vec![0; arity_out];
        let mut cap = vec![other_cap; arity_out];
        low[offset..offset + self.arity()].copy_from_slice(&self.low);
        cap[offset..offset + self.arity()].copy_from_slice(&self.cap);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; arity_out];
                f[offset..offset + e.len()].copy_from_slice(e);
                (f, c.clone())
            })
            .collect();
        Ok(Self::from_parts_unchecked(low, cap, terms))
    }

    pub fn to_wire(&self) -> MultiSeriesWire {
        MultiSeriesWire {
            arity: self.arity(),
            low: self.low.clone(),
            cap: self.cap.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_string()))
                .collect(),
        }
    }

    pub fn from_wire(w: &MultiSeriesWire) -> Result<Self, ExprError> {
        if w.low.len() != w.arity || w.cap.len() != w.arity {
            return Err(ExprError::ArityMismatch { expected: w.arity, found: w.low.len().max(w.cap.len()) });
        }
        let mut terms = Terms::new();
        for (e, c) in &w.terms {
            let q = parse_rational(c).map_err(|e| ExprError::InvalidWindow(e.to_string()))?;
            *terms.entry(e.clone()).or_insert_with(Rational::zero) += q;
        }
        Self::new(w.low.clone(), w.cap.clone(), terms)
    }
}

/// JSON form: `{"arity": n, "low": [..], "cap": [..], "terms": [[[e..], "p/q"], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MultiSeriesWire {
    pub arity: usize,
    pub low: Vec<i64>,
    pub cap: Vec<i64>,
    pub terms: Vec<(Vec<i64>, String)>,
}

impl Serialize for TruncatedMultiSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedMultiSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = MultiSeriesWire::deserialize(d)?;
        TruncatedMultiSeries::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn zip_with(a: &[i64], b: &[i64], f: impl Fn(i64, i64) -> i64) -> Vec<i64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub(crate) fn add_into(acc: &mut Terms, other: &Terms, scale: &Rational) {
    for (e, c) in other {
        let slot = acc.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c * scale;
        if slot.is_zero() {
            acc.remove(e);
        }
    }
}

/// Sparse product of term maps, keeping only exponents `<= cap` when given.
pub(crate) fn mul_terms(a: &Terms, b: &Terms, cap: Option<&[i64]>) -> Terms {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let left: Vec<(&Exponent, &Rational)> = a.iter().collect();
    let right: Vec<(&Exponent, &Rational)> = b.iter().collect();
    let chunk = (left.len() / 64).max(16);
    par::chunked_fold(
        &left,
        chunk,
        |block| {
            let mut acc = Terms::new();
            for (ea, ca) in block {
                for (eb, cb) in &right {
                    let e: Exponent = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                    if let Some(cap) = cap {
                        if e.iter().zip(cap).any(|(x, u)| x > u) {
                            continue;
                        }
                    }
                    *acc.entry(e).or_insert_with(Rational::zero) += *ca * *cb;
                }
            }
            acc.retain(|_, c| !c.is_zero());
            acc
        },
        |mut x, y| {
            add_into(&mut x, &y, &Rational::from_integer(1.into()));
            x
        },
    )
    .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn geometric(arity: usize, var: usize, cap: i64) -> TruncatedMultiSeries {
        let terms = (0..=cap)
            .map(|k| {
                let mut e = vec![0; arity];
                e[var] = k;
                (e, int(1))
            })
            .collect();
        TruncatedMultiSeries::with_uniform_cap(arity, cap, terms).unwrap()
    }

    #[test]
    fn product_of_geometrics_is_all_ones_on_box() {
        let p = geometric(2, 0, 4).mul(&geometric(2, 1, 4)).unwrap();
        assert_eq!(p.cap(), &[4, 4]);
        assert_eq!(p.terms().len(), 25);
        assert_eq!(p.coeff(&[3, 2]), Some(int(1)));
        assert_eq!(p.coeff(&[5, 0]), None);
    }

    #[test]
    fn laurent_factor_shrinks_window() {
        let inv_x = TruncatedMultiSeries::new(
            vec![-1],
            vec![10],
            [(vec![-1], int(1))].into_iter().collect(),
        )
        .unwrap();
        let p = inv_x.mul(&geometric(1, 0, 5)).unwrap();
        assert_eq!(p.low(), &[-1]);
        assert_eq!(p.cap(), &[4]);
        assert_eq!(p.coeff(&[-1]), Some(int(1)));
        assert_eq!(p.coeff(&[4]), Some(int(1)));
    }

    #[test]
    fn wire_round_trip() {
        let s = geometric(2, 1, 3);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with("{\"arity\":2,\"low\":[0,0],\"cap\":[3,3],\"terms\":[[[0,0],\"1\"]"));
        let back: TruncatedMultiSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn embedding_moves_variables() {
        let s = geometric(1, 0, 2).embed(3, 2, 7).unwrap();
        assert_eq!(s.cap(), &[7, 7, 2]);
        assert_eq!(s.coeff(&[0, 0, 2]), Some(int(1)));
        assert_eq!(s.coeff(&[1, 0, 0]), Some(int(0)));
    }
}
