//! Seeded randomized checks shared by the acceptance target and the
//! `selfcheck` command. Each suite reports the number of cases and a
//! description of every failing one.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::{expand, RationalExpr, Terms, TruncatedMultiSeries};
use crate::hypergeom::{contract, contraction_step, hg_coeffs, hg_operator, HypergeomParams};
use crate::par;
use crate::rational::{int, Rational};
use crate::series::{diagonal, dmap, hadamard, recompose, section, UniSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One RNG per case so the cases can run in any order.
fn case_rng(seed: u64, suite: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng.set_word_pos(case as u128 * 1024);
    rng
}

fn run_cases(name: &str, seed: u64, suite: u64, cases: usize, check: impl Fn(&mut ChaCha8Rng) -> Result<(), String> + Sync + Send) -> SuiteReport {
    let failures = par::map_range(cases, |i| check(&mut case_rng(seed, suite, i)).err().map(|e| format!("case {i}: {e}")))
        .into_iter()
        .flatten()
        .collect();
    SuiteReport { name: name.to_string(), cases, failures }
}

fn msg(e: impl ToString) -> String {
    e.to_string()
}

/// `p/q` with `1 <= q <= max_den` and `|p/q| <= bound`.
fn random_rational(rng: &mut ChaCha8Rng, max_den: i64, bound: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(-bound * q..=bound * q);
    Rational::new(p.into(), q.into())
}

fn random_beta(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    loop {
        let b = random_rational(rng, max_den, 3);
        if !(b.is_integer() && b <= Rational::zero()) {
            return b;
        }
    }
}

/// `n` in `1..=4`, denominators at most `max_den`, `β_n = 1`, no
/// nonpositive integer among the `β`s.
pub fn random_params(rng: &mut ChaCha8Rng, max_den: i64) -> HypergeomParams {
    let n = rng.gen_range(1..=4);
    let alpha = (0..n).map(|_| random_rational(rng, max_den, 3)).collect();
    let mut beta: Vec<Rational> = (0..n - 1).map(|_| random_beta(rng, max_den)).collect();
    beta.push(Rational::one());
    HypergeomParams::new(alpha, beta).expect("valid by construction")
}

/// `L(α; β)` kills `Σ c_i x^i` through the window.
pub fn annihilation_suite(seed: u64, cases: usize, order: usize) -> SuiteReport {
    run_cases("annihilation", seed, 1, cases, |rng| {
        let p = random_params(rng, 12);
        let f = hg_coeffs(&p, order).map_err(|e| format!("{p}: {e}"))?;
        let r = hg_operator(&p).apply(&f).map_err(|e| format!("{p}: {e}"))?;
        match r.coeffs().iter().position(|c| !c.is_zero()) {
            None => Ok(()),
            Some(i) => Err(format!("{p}: residual nonzero at x^{i}")),
        }
    })
}

/// Parameters with a forced pair `(i, j)` at difference `-1` or `0`.
pub fn random_resonant_params(rng: &mut ChaCha8Rng, max_den: i64) -> (HypergeomParams, usize, usize) {
    let n = rng.gen_range(2..=4);
    let mut alpha: Vec<Rational> = (0..n).map(|_| random_rational(rng, max_den, 3)).collect();
    let mut beta: Vec<Rational> = (0..n - 1).map(|_| random_beta(rng, max_den)).collect();
    beta.push(Rational::one());
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    let d = if rng.gen_bool(0.5) { -1 } else { 0 };
    if j == n - 1 {
        alpha[i] = &beta[j] + int(d);
    } else {
        // keep β_j away from nonpositive integers
        loop {
            let b = &alpha[i] - int(d);
            if !(b.is_integer() && b <= Rational::zero()) {
                beta[j] = b;
                break;
            }
            alpha[i] = random_rational(rng, max_den, 3);
        }
    }
    (HypergeomParams::new(alpha, beta).expect("valid by construction"), i, j)
}

/// The forced pair and every unshifted contraction step is an exact operator factorization.
pub fn contraction_suite(seed: u64, cases: usize) -> SuiteReport {
    run_cases("contraction", seed, 2, cases, |rng| {
        let (p, i, j) = random_resonant_params(rng, 12);
        let forced = contraction_step(p.alpha(), p.beta(), i, j).ok_or(format!("{p}: pair not resonant"))?;
        let mut checked: Vec<bool> = contract(&p).steps.iter().filter_map(|s| s.factorization_holds()).collect();
        checked.push(forced.factorization_holds().ok_or(format!("{p}: forced pair shifted"))?);
        if checked.iter().all(|&b| b) {
            Ok(())
        } else {
            Err(format!("{p}: factorization fails"))
        }
    })
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> UniSeries {
    UniSeries::new((0..=order).map(|_| random_rational(rng, 5, 4)).collect())
}

/// `f = Σ_r x^r e_{r,m}(f)(x^m)` for `m <= 6`.
pub fn eigen_suite(seed: u64, cases: usize) -> SuiteReport {
    run_cases("eigen-decomposition", seed, 3, cases, |rng| {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(m - 1..=30);
        let f = random_series(rng, n);
        let parts: Vec<UniSeries> = (0..m).map(|r| section(&f, r, m).expect("r <= n")).collect();
        let g = recompose(&parts).map_err(msg)?;
        if g == f {
            Ok(())
        } else {
            Err(format!("m = {m}, window {n}"))
        }
    })
}

/// `e_{s,m0}(e_{r,m}(f)) = e_{r+ms, m m0}(f)` for coprime `m`, `m0`.
pub fn composition_suite(seed: u64, cases: usize) -> SuiteReport {
    run_cases("section-composition", seed, 4, cases, |rng| {
        let (m, m0) = loop {
            let a: usize = rng.gen_range(1..=6);
            let b: usize = rng.gen_range(1..=6);
            if num_integer::gcd(a, b) == 1 {
                break (a, b);
            }
        };
        let r = rng.gen_range(0..m);
        let s = rng.gen_range(0..m0);
        let t = r + m * s;
        let n = t + rng.gen_range(0..=40);
        let f = random_series(rng, n);
        let inner = section(&f, r, m).map_err(msg)?;
        let lhs = section(&inner, s, m0).map_err(msg)?;
        let rhs = section(&f, t, m * m0).map_err(msg)?;
        if lhs == rhs {
            Ok(())
        } else {
            Err(format!("m = {m}, m0 = {m0}, r = {r}, s = {s}, window {n}"))
        }
    })
}

/// Random sparse terms inside the box `[0, caps]`.
fn random_sparse(rng: &mut ChaCha8Rng, caps: &[i64], terms: usize) -> Terms {
    let mut t = Terms::new();
    for _ in 0..terms {
        let e: Vec<i64> = caps.iter().map(|&c| rng.gen_range(0..=c)).collect();
        t.insert(e, random_rational(rng, 5, 4));
    }
    t
}

/// `Δ_n(𝒟(F))` has coefficient `F_{i,...,i,(n+1)i}` at `x^i`.
pub fn dmap_suite(seed: u64, cases: usize) -> SuiteReport {
    run_cases("diagonal-of-dmap", seed, 5, cases, |rng| {
        let n = rng.gen_range(0..=2usize);
        let cap = rng.gen_range(2..=6i64);
        let mut caps = vec![cap; n + 1];
        caps.push(cap * (n as i64 + 1));
        let mut t = random_sparse(rng, &caps, 30);
        // plant terms on the diagonal stratum so the identity is not vacuous
        for i in 0..=cap {
            if rng.gen_bool(0.5) {
                let mut e = vec![i; n + 1];
                e.push((n as i64 + 1) * i);
                t.insert(e, random_rational(rng, 5, 4));
            }
        }
        t.retain(|_, c| !c.is_zero());
        let big = TruncatedMultiSeries::new(vec![0; n + 2], caps, t).map_err(msg)?;
        let d = diagonal(&dmap(&big).map_err(msg)?, n).map_err(msg)?;
        if d.trunc() != cap as usize {
            return Err(format!("window {} instead of {cap}", d.trunc()));
        }
        for (i, c) in d.coeffs().iter().enumerate() {
            let mut e = vec![i as i64; n + 1];
            e.push((n as i64 + 1) * i as i64);
            if big.coeff(&e).as_ref() != Some(c) {
                return Err(format!("n = {n}, coefficient {i}"));
            }
        }
        Ok(())
    })
}

/// Renames `x_i` to `x_{i+k}`.
pub fn shift_vars(e: &RationalExpr, k: usize) -> RationalExpr {
    use RationalExpr as E;
    match e {
        E::Var(i) => E::Var(i + k),
        E::Const(_) => e.clone(),
        E::Neg(a) => E::Neg(Box::new(shift_vars(a, k))),
        E::Add(a, b) => E::Add(Box::new(shift_vars(a, k)), Box::new(shift_vars(b, k))),
        E::Sub(a, b) => E::Sub(Box::new(shift_vars(a, k)), Box::new(shift_vars(b, k))),
        E::Mul(a, b) => E::Mul(Box::new(shift_vars(a, k)), Box::new(shift_vars(b, k))),
        E::Div(a, b) => E::Div(Box::new(shift_vars(a, k)), Box::new(shift_vars(b, k))),
        E::Pow(a, n) => E::Pow(Box::new(shift_vars(a, k)), *n),
    }
}

fn random_poly_expr(rng: &mut ChaCha8Rng, arity: usize, terms: usize, with_constant: bool) -> RationalExpr {
    let mut acc = if with_constant { RationalExpr::Const(random_rational(rng, 3, 2)) } else { RationalExpr::Const(Rational::zero()) };
    for _ in 0..terms {
        let mut mono = RationalExpr::Const(random_rational(rng, 3, 2));
        let mut any = false;
        for v in 0..arity {
            let p = rng.gen_range(0..=2u32);
            if p > 0 {
                any = true;
                mono = RationalExpr::Mul(Box::new(mono), Box::new(RationalExpr::Pow(Box::new(RationalExpr::Var(v)), p as i64)));
            }
        }
        if !any {
            mono = RationalExpr::Mul(Box::new(mono), Box::new(RationalExpr::Var(rng.gen_range(0..arity))));
        }
        acc = RationalExpr::Add(Box::new(acc), Box::new(mono));
    }
    acc
}

/// `P / (1 - Q)` with `Q(0) = 0`.
pub fn random_rational_expr(rng: &mut ChaCha8Rng, arity: usize) -> RationalExpr {
    let num = random_poly_expr(rng, arity, 2, true);
    let q = random_poly_expr(rng, arity, 2, false);
    let den = RationalExpr::Sub(Box::new(RationalExpr::Const(Rational::one())), Box::new(q));
    RationalExpr::Div(Box::new(num), Box::new(den))
}

/// `Δ(g1(x_0..) g2(x_k1..)) = Δ(g1) * Δ(g2)`.
pub fn disjoint_product_suite(seed: u64, cases: usize) -> SuiteReport {
    run_cases("disjoint-product", seed, 6, cases, |rng| {
        let k1 = rng.gen_range(1..=2usize);
        let k2 = rng.gen_range(1..=2usize);
        let n = rng.gen_range(0..=4i64);
        let g1 = random_rational_expr(rng, k1);
        let g2 = random_rational_expr(rng, k2);
        let prod = RationalExpr::Mul(Box::new(g1.clone()), Box::new(shift_vars(&g2, k1)));
        let d1 = diagonal(&expand(&g1, &vec![n; k1]).map_err(msg)?, k1 - 1).map_err(msg)?;
        let d2 = diagonal(&expand(&g2, &vec![n; k2]).map_err(msg)?, k2 - 1).map_err(msg)?;
        let dp = diagonal(&expand(&prod, &vec![n; k1 + k2]).map_err(msg)?, k1 + k2 - 1).map_err(msg)?;
        if dp == hadamard(&d1, &d2) {
            Ok(())
        } else {
            Err(format!("g1 = {g1}, g2 = {g2}, window {n}"))
        }
    })
}

/// The section-operator checks, `cases` each.
pub fn section_suites(seed: u64, cases: usize) -> Vec<SuiteReport> {
    vec![
        eigen_suite(seed, cases),
        composition_suite(seed, cases),
        dmap_suite(seed, cases),
        disjoint_product_suite(seed, cases),
    ]
}

/// Everything, with the case counts used by the acceptance target.
pub fn all(seed: u64) -> Vec<SuiteReport> {
    let mut out = vec![annihilation_suite(seed, 50, 40), contraction_suite(seed, 20)];
    out.extend(section_suites(seed, 200));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for r in [annihilation_suite(1, 5, 20), contraction_suite(1, 5)]
            .into_iter()
            .chain(section_suites(1, 10))
        {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn cases_are_reproducible() {
        let a = random_params(&mut case_rng(7, 1, 3), 12);
        let b = random_params(&mut case_rng(7, 1, 3), 12);
        assert_eq!(a, b);
    }
}
