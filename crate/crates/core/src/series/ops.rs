use num_traits::{One, Zero};

use super::{SeriesError, UniSeries};
use crate::expr::{expand_exact, mul_terms, Exponent, RationalExpr, Terms, TruncatedMultiSeries};
use crate::rational::Rational;

/// `Δ_n`: the coefficients at `(i, ..., i)` of a series in `n + 1`
/// variables. Sound through `min(cap)`.
pub fn diagonal(ms: &TruncatedMultiSeries, n: usize) -> Result<UniSeries, SeriesError> {
    if ms.arity() != n + 1 {
        return Err(SeriesError::ArityMismatch { expected: n + 1, found: ms.arity() });
    }
    if !ms.is_power_series() {
        return Err(SeriesError::NotPowerSeries);
    }
    let trunc = *ms.cap().iter().min().expect("arity >= 1");
    if trunc < 0 {
        return Err(SeriesError::WindowTooSmall { needed: 0, have: 0 });
    }
    let mut coeffs = vec![Rational::zero(); trunc as usize + 1];
    for (e, c) in ms.terms() {
        let i = e[0];
        if i <= trunc && e.iter().all(|&x| x == i) {
            coeffs[i as usize] = c.clone();
        }
    }
    Ok(UniSeries::new(coeffs))
}

/// Coefficientwise product on the common window.
pub fn hadamard(f: &UniSeries, g: &UniSeries) -> UniSeries {
    let n = f.trunc().min(g.trunc());
    UniSeries::from_fn(n, |i| &f.coeffs()[i] * &g.coeffs()[i])
}

/// Iterated Hadamard product; `None` for an empty list.
pub fn hadamard_all(series: &[UniSeries]) -> Option<UniSeries> {
    let n = series.iter().map(UniSeries::trunc).min()?;
    Some(UniSeries::from_fn(n, |i| {
        series.iter().fold(Rational::one(), |acc, s| acc * &s.coeffs()[i])
    }))
}

/// `e_{r,m}`: coefficient `k` of the result is coefficient `r + k m` of `f`.
/// Sound through `floor((trunc - r) / m)`.
pub fn section(f: &UniSeries, r: usize, m: usize) -> Result<UniSeries, SeriesError> {
    if m == 0 || r >= m {
        return Err(SeriesError::ResidueOutOfRange { r, m });
    }
    if f.trunc() < r {
        return Err(SeriesError::WindowTooSmall { needed: r, have: f.trunc() });
    }
    let trunc = (f.trunc() - r) / m;
    Ok(UniSeries::from_fn(trunc, |k| f.coeffs()[r + k * m].clone()))
}

/// `Σ_r x^r s_r(x^m)` for `m = sections.len()`.
///
/// Known through `min_r (r + m (trunc_r + 1)) - 1`: beyond that the first
/// unknown coefficient of some section would enter.
pub fn recompose(sections: &[UniSeries]) -> Result<UniSeries, SeriesError> {
    let m = sections.len();
    if m == 0 {
        return Err(SeriesError::EmptyList);
    }
    let trunc = sections
        .iter()
        .enumerate()
        .map(|(r, s)| r + m * (s.trunc() + 1))
        .min()
        .expect("nonempty")
        - 1;
    Ok(UniSeries::from_fn(trunc, |i| sections[i % m].coeffs()[i / m].clone()))
}

/// The `𝒟` map on a series in `x_0 .. x_{n+1}`: keeps the terms whose last
/// exponent equals the sum of the others and drops the last variable.
///
/// Output caps are `min(cap_i, floor(cap_{n+1} / (n + 1)))`, which is the
/// largest uniform box on which every needed input coefficient is known.
pub fn dmap(ms: &TruncatedMultiSeries) -> Result<TruncatedMultiSeries, SeriesError> {
    let arity = ms.arity();
    if arity < 2 {
        return Err(SeriesError::ArityTooSmall(arity));
    }
    if !ms.is_power_series() {
        return Err(SeriesError::NotPowerSeries);
    }
    let n1 = (arity - 1) as i64;
    let last = ms.cap()[arity - 1];
    let cap: Vec<i64> = ms.cap()[..arity - 1].iter().map(|&c| c.min(last.div_euclid(n1))).collect();
    let terms: Terms = ms
        .terms()
        .iter()
        .filter(|(e, _)| e[arity - 1] == e[..arity - 1].iter().sum::<i64>())
        .map(|(e, c)| (e[..arity - 1].to_vec(), c.clone()))
        .collect();
    Ok(TruncatedMultiSeries::new(vec![0; arity - 1], cap, terms)?)
}

/// `Σ_n ct(f^n) x^n` through `x^N` for a Laurent polynomial `f`.
pub fn constant_term_series(f: &RationalExpr, order: usize) -> Result<UniSeries, SeriesError> {
    let arity = f.min_arity();
    let base = expand_exact(f, arity)?;
    let zero: Exponent = vec![0; arity];
    // Terms of f^k that can no longer reach the origin in the remaining
    // steps are pruned: each factor moves an exponent by at most the span
    // of f's support.
    let (lo, hi) = support_span(&base, arity);
    let mut power: Terms = [(zero.clone(), Rational::one())].into_iter().collect();
    let mut out = Vec::with_capacity(order + 1);
    out.push(Rational::one());
    for k in 1..=order {
        power = mul_terms(&power, &base, None);
        let left = (order - k) as i64;
        power.retain(|e, _| {
            e.iter().enumerate().all(|(i, &x)| x + left * lo[i] <= 0 && x + left * hi[i] >= 0)
        });
        out.push(power.get(&zero).cloned().unwrap_or_else(Rational::zero));
    }
    Ok(UniSeries::new(out))
}

fn support_span(terms: &Terms, arity: usize) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![0; arity];
    let mut hi = vec![0; arity];
    for e in terms.keys() {
        for i in 0..arity {
            lo[i] = lo[i].min(e[i]);
            hi[i] = hi[i].max(e[i]);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{expand, parse_expr};
    use crate::rational::int;

    fn binom(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn central_binomial_diagonal() {
        let ms = expand(&parse_expr("1/(1-x0-x1)", 2).unwrap(), &[6, 6]).unwrap();
        let d = diagonal(&ms, 1).unwrap();
        let want: Vec<i64> = (0..=6).map(|n| binom(2 * n, n)).collect();
        assert_eq!(d, UniSeries::from_ints(&want));
        assert!(matches!(diagonal(&ms, 2), Err(SeriesError::ArityMismatch { .. })));
    }

    #[test]
    fn diagonal_of_constant_is_constant() {
        let ms = expand(&parse_expr("1", 3).unwrap(), &[3, 3, 3]).unwrap();
        assert_eq!(diagonal(&ms, 2).unwrap(), UniSeries::from_ints(&[1, 0, 0, 0]));
    }

    #[test]
    fn sections_and_recomposition() {
        let n = UniSeries::from_ints(&[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(section(&n, 1, 2).unwrap(), UniSeries::from_ints(&[1, 3, 5, 7]));
        assert_eq!(section(&n, 0, 1).unwrap(), n);
        assert_eq!(section(&n, 2, 2), Err(SeriesError::ResidueOutOfRange { r: 2, m: 2 }));
        let parts: Vec<_> = (0..3).map(|r| section(&n, r, 3).unwrap()).collect();
        assert_eq!(recompose(&parts).unwrap(), n);
        let g = UniSeries::geometric(4);
        let even = recompose(&[g.clone(), UniSeries::zero(4)]).unwrap();
        assert_eq!(even.trunc(), 9);
        assert_eq!(even, UniSeries::from_ints(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0]));
        assert_eq!(recompose(&[]), Err(SeriesError::EmptyList));
    }

    #[test]
    fn dmap_keeps_the_constraint_stratum() {
        let terms: Terms = [(vec![1, 2, 3], int(1)), (vec![1, 1, 3], int(1))].into_iter().collect();
        let ms = TruncatedMultiSeries::new(vec![0; 3], vec![4, 4, 8], terms).unwrap();
        let d = dmap(&ms).unwrap();
        assert_eq!(d.cap(), &[4, 4]);
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.coeff(&[1, 2]), Some(int(1)));

        let ms = expand(&parse_expr("1/((1-x0)*(1-x1))", 2).unwrap(), &[5, 5]).unwrap();
        let d = dmap(&ms).unwrap();
        assert_eq!(d.cap(), &[5]);
        assert_eq!(d.coeff(&[0]), Some(int(1)));
        assert_eq!(d.coeff(&[1]), Some(int(1)));
        assert_eq!(diagonal(&d, 0).unwrap(), UniSeries::geometric(5));
    }

    #[test]
    fn constant_terms_of_powers() {
        let cts = constant_term_series(&parse_expr("x0 + 1/x0", 1).unwrap(), 6).unwrap();
        assert_eq!(cts, UniSeries::from_ints(&[1, 0, 2, 0, 6, 0, 20]));
        let b1 = constant_term_series(&parse_expr("(x0+1)*(1/x0+1)", 1).unwrap(), 3).unwrap();
        assert_eq!(b1, UniSeries::from_ints(&[1, 2, 6, 20]));
        let c = constant_term_series(&parse_expr("3", 0).unwrap(), 3).unwrap();
        assert_eq!(c, UniSeries::from_ints(&[1, 3, 9, 27]));
        assert!(matches!(
            constant_term_series(&parse_expr("1/(1-x0)", 1).unwrap(), 3),
            Err(SeriesError::Expr(_))
        ));
    }
}
