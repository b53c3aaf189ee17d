use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{SeriesError, UniSeries};
use crate::rational::{int, serde_str, Rational};

/// Coefficients of `(1 + c x)^γ` through `x^N`:
/// `a_k = a_{k-1} (γ - k + 1) c / k`.
pub fn binomial_power_series(c: &Rational, gamma: &Rational, order: usize) -> UniSeries {
    let mut out = Vec::with_capacity(order + 1);
    let mut a = Rational::one();
    out.push(a.clone());
    for k in 1..=order {
        a = a * (gamma - int(k as i64 - 1)) * c / int(k as i64);
        out.push(a.clone());
    }
    UniSeries::new(out)
}

/// `P(x, y) = Σ c_{ij} x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl BivariatePoly {
    pub fn new(terms: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c: &mut Rational| !c.is_zero());
        BivariatePoly { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.terms
    }

    pub fn y_degree(&self) -> usize {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// `P(x, y(x))` through `x^n`, with `y` known at least that far.
    pub fn eval_series(&self, y: &[Rational], n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n + 1];
        let mut ypow = vec![Rational::zero(); n + 1];
        ypow[0] = Rational::one();
        for j in 0..=self.y_degree() {
            if j > 0 {
                ypow = truncated_product(&ypow, y, n);
            }
            for (&(i, jj), c) in &self.terms {
                if jj != j {
                    continue;
                }
                for k in i..=n {
                    out[k] += c * &ypow[k - i];
                }
            }
        }
        out
    }

    /// `∂P/∂y (0, y0)`.
    fn dy_at_origin(&self, y0: &Rational) -> Rational {
        let mut s = Rational::zero();
        for (&(i, j), c) in &self.terms {
            if i == 0 && j > 0 {
                s += c * int(j as i64) * num_traits::pow(y0.clone(), j - 1);
            }
        }
        s
    }
}

fn truncated_product(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let mut s = Rational::zero();
            for i in 0..=k {
                if let (Some(x), Some(y)) = (a.get(i), b.get(k - i)) {
                    s += x * y;
                }
            }
            s
        })
        .collect()
}

/// An algebraic series, given either as a binomial power or as the root of
/// a bivariate polynomial fixed by its first coefficients.
///
/// JSON: `{"kind": "binomial_power", "c": "p/q", "gamma": "p/q"}` or
/// `{"kind": "polynomial_root", "annihilator": [[i, j, "p/q"], ...],
/// "seed": ["p/q", ...]}` where `[i, j, c]` is the term `c x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraicSpec {
    BinomialPower {
        #[serde(with = "serde_str")]
        c: Rational,
        #[serde(with = "serde_str")]
        gamma: Rational,
    },
    PolynomialRoot {
        #[serde(with = "annihilator_wire")]
        annihilator: BivariatePoly,
        #[serde(with = "serde_str::vec")]
        seed: Vec<Rational>,
    },
}

impl AlgebraicSpec {
    pub fn binomial(c: Rational, gamma: Rational) -> Self {
        AlgebraicSpec::BinomialPower { c, gamma }
    }
}

mod annihilator_wire {
    use super::BivariatePoly;
    use crate::rational::parse_rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &BivariatePoly, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, String)> =
            p.terms().iter().map(|(&(i, j), c)| (i, j, c.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BivariatePoly, D::Error> {
        let v = Vec::<(usize, usize, String)>::deserialize(d)?;
        let terms = v
            .into_iter()
            .map(|(i, j, c)| parse_rational(&c).map(|q| ((i, j), q)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(BivariatePoly::new(terms))
    }
}

/// Coefficients of the algebraic series through `x^N`.
///
/// For a polynomial root each new coefficient solves the linear equation
/// `[P(x, y_{<k} + y_k x^k)]_k = 0`, whose slope is `∂P/∂y(0, y_0)`.
pub fn algebraic_series(spec: &AlgebraicSpec, order: usize) -> Result<UniSeries, SeriesError> {
    match spec {
        AlgebraicSpec::BinomialPower { c, gamma } => Ok(binomial_power_series(c, gamma, order)),
        AlgebraicSpec::PolynomialRoot { annihilator, seed } => {
            if seed.is_empty() {
                return Err(SeriesError::Invalid("seed must have at least one coefficient".into()));
            }
            let l = seed.len();
            let check = annihilator.eval_series(seed, l - 1);
            if let Some(k) = check.iter().position(|c| !c.is_zero()) {
                return Err(SeriesError::SeedInconsistent { order: k });
            }
            let mut y: Vec<Rational> = seed.clone();
            y.truncate(order + 1);
            let lin = annihilator.dy_at_origin(&y[0]);
            for k in l..=order {
                if lin.is_zero() {
                    return Err(SeriesError::ContinuationSingular { step: k });
                }
                y.push(Rational::zero());
                let residual = annihilator.eval_series(&y, k);
                y[k] = -&residual[k] / &lin;
            }
            let series = UniSeries::new(y);
            debug_assert!(annihilator.eval_series(series.coeffs(), order).iter().all(Zero::is_zero));
            Ok(series)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn sqrt_one_minus_x() -> BivariatePoly {
        // y^2 - 1 + x
        BivariatePoly::new([((0, 2), int(1)), ((0, 0), int(-1)), ((1, 0), int(1))])
    }

    #[test]
    fn binomial_powers() {
        assert_eq!(binomial_power_series(&int(-1), &int(-1), 4), UniSeries::geometric(4));
        let half = binomial_power_series(&int(-1), &ratio(-1, 2), 3);
        assert_eq!(half.coeffs(), &[int(1), ratio(1, 2), ratio(3, 8), ratio(5, 16)]);
        let root = binomial_power_series(&int(-1), &ratio(1, 2), 3);
        assert_eq!(root.coeffs(), &[int(1), ratio(-1, 2), ratio(-1, 8), ratio(-1, 16)]);
        assert_eq!(binomial_power_series(&int(2), &int(2), 4), UniSeries::from_ints(&[1, 4, 4, 0, 0]));
    }

    #[test]
    fn polynomial_roots() {
        let spec = AlgebraicSpec::PolynomialRoot { annihilator: sqrt_one_minus_x(), seed: vec![int(1)] };
        let y = algebraic_series(&spec, 10).unwrap();
        assert_eq!(y, binomial_power_series(&int(-1), &ratio(1, 2), 10));

        // y = 1 + x y^2
        let catalan = BivariatePoly::new([((0, 1), int(1)), ((0, 0), int(-1)), ((1, 2), int(-1))]);
        let spec = AlgebraicSpec::PolynomialRoot { annihilator: catalan, seed: vec![int(1)] };
        assert_eq!(algebraic_series(&spec, 4).unwrap(), UniSeries::from_ints(&[1, 1, 2, 5, 14]));

        let bad = AlgebraicSpec::PolynomialRoot { annihilator: sqrt_one_minus_x(), seed: vec![int(2)] };
        assert_eq!(algebraic_series(&bad, 4), Err(SeriesError::SeedInconsistent { order: 0 }));

        // y^2 - x^2: the slope 2*y0 vanishes at y0 = 0
        let sing = BivariatePoly::new([((0, 2), int(1)), ((2, 0), int(-1))]);
        let spec = AlgebraicSpec::PolynomialRoot { annihilator: sing, seed: vec![int(0)] };
        assert_eq!(algebraic_series(&spec, 3), Err(SeriesError::ContinuationSingular { step: 1 }));
    }

    #[test]
    fn spec_json() {
        let spec = AlgebraicSpec::binomial(int(-1), ratio(-1, 2));
        let j = serde_json::to_string(&spec).unwrap();
        assert_eq!(j, r#"{"kind":"binomial_power","c":"-1","gamma":"-1/2"}"#);
        assert_eq!(serde_json::from_str::<AlgebraicSpec>(&j).unwrap(), spec);
        let spec = AlgebraicSpec::PolynomialRoot { annihilator: sqrt_one_minus_x(), seed: vec![int(1)] };
        let j = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            j,
            r#"{"kind":"polynomial_root","annihilator":[[0,0,"-1"],[0,2,"1"],[1,0,"1"]],"seed":["1"]}"#
        );
        assert_eq!(serde_json::from_str::<AlgebraicSpec>(&j).unwrap(), spec);
    }
}
