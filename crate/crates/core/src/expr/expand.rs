//! Expansion of rational expressions as truncated series at the origin.
//!
//! Each subexpression is evaluated to a [`Node`] that records, per variable,
//! a guaranteed lower bound on its support (`val`) and the largest exponent
//! through which its stored coefficients are exact (`cap`). Polynomial and
//! Laurent-polynomial subexpressions are exact in every variable until a
//! truncation actually drops a term. The top level retries with a wider
//! working box until the requested window is sound.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::multiseries::{add_into, mul_terms, Exponent, Terms, TruncatedMultiSeries};
use super::{ExprError, RationalExpr};
use crate::par;
use crate::rational::Rational;

const INF: i64 = i64::MAX / 4;
const MAX_WIDENINGS: usize = 12;

fn sadd(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        a + b
    }
}

#[derive(Clone, Debug)]
struct Node {
    terms: Terms,
    val: Vec<i64>,
    cap: Vec<i64>,
    exact: bool,
}

impl Node {
    fn exact(terms: Terms, arity: usize) -> Node {
        let val = support_min(&terms, arity);
        Node { terms, val, cap: vec![INF; arity], exact: true }
    }

    fn is_exact_zero(&self) -> bool {
        self.exact && self.terms.is_empty()
    }
}

fn support_min(terms: &Terms, arity: usize) -> Vec<i64> {
    let mut m = vec![INF; arity];
    for e in terms.keys() {
        for (mi, &x) in m.iter_mut().zip(e) {
            *mi = (*mi).min(x);
        }
    }
    m
}

fn support_max(terms: &Terms, arity: usize) -> Vec<i64> {
    let mut m = vec![i64::MIN; arity];
    for e in terms.keys() {
        for (mi, &x) in m.iter_mut().zip(e) {
            *mi = (*mi).max(x);
        }
    }
    m
}

struct Evaluator<'a> {
    arity: usize,
    /// Working box; `None` means Laurent-polynomial mode, where any
    /// truncation is an error.
    work: Option<&'a [i64]>,
}

impl Evaluator<'_> {
    fn eval(&self, e: &RationalExpr) -> Result<Node, ExprError> {
        match e {
            RationalExpr::Const(c) => {
                let mut t = Terms::new();
                if !c.is_zero() {
                    t.insert(vec![0; self.arity], c.clone());
                }
                Ok(Node::exact(t, self.arity))
            }
            RationalExpr::Var(i) => {
                if *i >= self.arity {
                    return Err(ExprError::Arity { index: *i, arity: self.arity, position: 0 });
                }
                let mut ex = vec![0; self.arity];
                ex[*i] = 1;
                let t: Terms = [(ex, Rational::one())].into_iter().collect();
                Ok(self.bounded(Node::exact(t, self.arity)))
            }
            RationalExpr::Neg(a) => {
                let mut n = self.eval(a)?;
                for c in n.terms.values_mut() {
                    *c = -c.clone();
                }
                Ok(n)
            }
            RationalExpr::Add(a, b) => Ok(self.add(self.eval(a)?, &self.eval(b)?, false)),
            RationalExpr::Sub(a, b) => Ok(self.add(self.eval(a)?, &self.eval(b)?, true)),
            RationalExpr::Mul(a, b) => Ok(self.mul(&self.eval(a)?, &self.eval(b)?)),
            RationalExpr::Div(a, b) => {
                let num = self.eval(a)?;
                let inv = self.inverse(&self.eval(b)?)?;
                Ok(self.mul(&num, &inv))
            }
            RationalExpr::Pow(a, k) => {
                let base = self.eval(a)?;
                let p = self.pow(&base, k.unsigned_abs());
                if *k < 0 {
                    self.inverse(&p)
                } else {
                    Ok(p)
                }
            }
        }
    }

    /// Drops terms outside the working box, downgrading exactness if any go.
    fn bounded(&self, mut n: Node) -> Node {
        let Some(w) = self.work else { return n };
        let before = n.terms.len();
        n.terms.retain(|e, _| e.iter().zip(w).all(|(x, u)| x <= u));
        if n.terms.len() != before {
            n.exact = false;
            n.cap = w.to_vec();
        }
        n
    }

    fn add(&self, mut a: Node, b: &Node, negate: bool) -> Node {
        let sign = if negate { -Rational::one() } else { Rational::one() };
        add_into(&mut a.terms, &b.terms, &sign);
        if a.exact && b.exact {
            return Node::exact(a.terms, self.arity);
        }
        let val = a.val.iter().zip(&b.val).map(|(x, y)| *x.min(y)).collect();
        let cap = a.cap.iter().zip(&b.cap).map(|(x, y)| *x.min(y)).collect();
        Node { terms: a.terms, val, cap, exact: false }
    }

    fn mul(&self, a: &Node, b: &Node) -> Node {
        if a.is_exact_zero() || b.is_exact_zero() {
            return Node::exact(Terms::new(), self.arity);
        }
        let val: Vec<i64> = a.val.iter().zip(&b.val).map(|(x, y)| sadd(*x, *y)).collect();
        let mut cap: Vec<i64> = (0..self.arity)
            .map(|i| sadd(a.cap[i], b.val[i]).min(sadd(b.cap[i], a.val[i])))
            .collect();
        let reach: Vec<i64> = {
            let (ma, mb) = (support_max(&a.terms, self.arity), support_max(&b.terms, self.arity));
            ma.iter().zip(&mb).map(|(x, y)| x.saturating_add(*y)).collect()
        };
        let fits = match self.work {
            None => true,
            Some(w) => reach.iter().zip(w).all(|(r, u)| r <= u),
        };
        if a.exact && b.exact && fits {
            let terms = mul_terms(&a.terms, &b.terms, None);
            return Node::exact(terms, self.arity);
        }
        if let Some(w) = self.work {
            for (c, u) in cap.iter_mut().zip(w) {
                *c = (*c).min(*u);
            }
        }
        let terms = mul_terms(&a.terms, &b.terms, Some(&cap));
        Node { terms, val, cap, exact: false }
    }

    fn pow(&self, base: &Node, mut k: u64) -> Node {
        let mut acc = Node::exact(
            [(vec![0; self.arity], Rational::one())].into_iter().collect(),
            self.arity,
        );
        let mut sq = base.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `1/d`, clearing a single monomial `x^m` so that `d = x^m * u` with
    /// `u(0) != 0`.
    fn inverse(&self, d: &Node) -> Result<Node, ExprError> {
        if d.terms.is_empty() {
            return Err(ExprError::DenominatorVanishes(
                "denominator is zero on the working window".into(),
            ));
        }
        let m = if d.exact { support_min(&d.terms, self.arity) } else { d.val.clone() };
        let Some(lead) = d.terms.get(&m) else {
            return Err(ExprError::DenominatorVanishes(format!(
                "denominator has no term at its lowest exponent {m:?}; no monomial clears it"
            )));
        };
        let neg_m: Exponent = m.iter().map(|x| -x).collect();
        if d.exact && d.terms.len() == 1 {
            let t: Terms = [(neg_m, lead.recip())].into_iter().collect();
            return Ok(self.bounded(Node::exact(t, self.arity)));
        }
        let Some(w) = self.work else {
            return Err(ExprError::NotLaurentPolynomial);
        };
        let unit: Terms = d
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&m).map(|(x, y)| x - y).collect(), c.clone()))
            .collect();
        let unit_cap: Vec<i64> = d.cap.iter().zip(&m).map(|(c, y)| if *c >= INF { INF } else { c - y }).collect();
        let bx: Vec<i64> = (0..self.arity).map(|i| unit_cap[i].min(w[i] + m[i])).collect();
        let inv = invert_unit(&unit, &bx);
        let terms = inv
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&m).map(|(x, y)| x - y).collect(), c))
            .collect();
        Ok(Node {
            terms,
            val: neg_m,
            cap: bx.iter().zip(&m).map(|(b, y)| b - y).collect(),
            exact: false,
        })
    }
}

/// Inverse of a power series with nonzero constant term on the box
/// `0 ..= bx`.
///
/// Coefficients are lifted one total degree at a time:
/// `c_e = -(1/u_0) * sum_{d != 0} u_d c_{e-d}`. Only exponents reachable from
/// the support of `u` are visited, and each degree level is computed in
/// parallel.
pub(crate) fn invert_unit(u: &Terms, bx: &[i64]) -> Terms {
    let arity = bx.len();
    let mut out = Terms::new();
    if bx.iter().any(|&b| b < 0) {
        return out;
    }
    let zero = vec![0i64; arity];
    let inv0 = u.get(&zero).expect("unit has a constant term").recip();
    let steps: Vec<(&Exponent, &Rational)> = u
        .iter()
        .filter(|(e, _)| **e != zero && e.iter().zip(bx).all(|(x, b)| x <= b))
        .collect();
    out.insert(zero.clone(), inv0.clone());
    let mut pending: BTreeMap<i64, BTreeSet<Exponent>> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<i64, BTreeSet<Exponent>>, e: &Exponent| {
        for (d, _) in &steps {
            let f: Exponent = e.iter().zip(d.iter()).map(|(x, y)| x + y).collect();
            if f.iter().zip(bx).all(|(x, b)| x <= b) {
                pending.entry(f.iter().sum()).or_default().insert(f);
            }
        }
    };
    push(&mut pending, &zero);
    while let Some((_, level)) = pending.pop_first() {
        let level: Vec<Exponent> = level.into_iter().collect();
        let vals = par::map_slice(&level, |e| {
            let mut s = Rational::zero();
            for (d, ud) in &steps {
                if d.iter().zip(e).any(|(x, y)| x > y) {
                    continue;
                }
                let prev: Exponent = e.iter().zip(d.iter()).map(|(x, y)| x - y).collect();
                if let Some(c) = out.get(&prev) {
                    s += *ud * c;
                }
            }
            -s * &inv0
        });
        for (e, c) in level.into_iter().zip(vals) {
            if !c.is_zero() {
                push(&mut pending, &e);
                out.insert(e, c);
            }
        }
    }
    out
}

/// Expands `expr` as a power series on the box `0 ..= cap`.
pub fn expand(expr: &RationalExpr, cap: &[i64]) -> Result<TruncatedMultiSeries, ExprError> {
    expand_laurent(expr, &vec![0; cap.len()], cap)
}

/// Expands `expr` on the window `low ..= cap` (with `low <= 0`), allowing
/// Laurent terms down to `low`.
pub fn expand_laurent(
    expr: &RationalExpr,
    low: &[i64],
    cap: &[i64],
) -> Result<TruncatedMultiSeries, ExprError> {
    let arity = cap.len();
    if low.len() != arity {
        return Err(ExprError::ArityMismatch { expected: arity, found: low.len() });
    }
    if expr.min_arity() > arity {
        return Err(ExprError::Arity { index: expr.min_arity() - 1, arity, position: 0 });
    }
    if cap.iter().any(|&c| c < 0) {
        return Err(ExprError::CapNegative);
    }
    if low.iter().any(|&l| l > 0) {
        return Err(ExprError::InvalidWindow("low bounds must be <= 0".into()));
    }
    let mut work = cap.to_vec();
    for _ in 0..MAX_WIDENINGS {
        let node = Evaluator { arity, work: Some(&work) }.eval(expr)?;
        let short: Vec<usize> = (0..arity).filter(|&i| node.cap[i] < cap[i]).collect();
        if short.is_empty() {
            if let Some(i) = (0..arity).find(|&i| node.val[i] < low[i]) {
                return Err(ExprError::DenominatorVanishes(format!(
                    "expansion reaches exponent {} in x{i}, below the window low {}",
                    node.val[i], low[i]
                )));
            }
            return Ok(TruncatedMultiSeries::from_parts_unchecked(
                low.to_vec(),
                cap.to_vec(),
                node.terms,
            ));
        }
        for i in short {
            work[i] += (cap[i] - node.cap[i]).max(1);
        }
    }
    Err(ExprError::TruncationUnreachable)
}

/// Expands a Laurent polynomial exactly (no truncation). Any division by a
/// non-monomial is an error.
pub fn expand_exact(expr: &RationalExpr, arity: usize) -> Result<Terms, ExprError> {
    if expr.min_arity() > arity {
        return Err(ExprError::Arity { index: expr.min_arity() - 1, arity, position: 0 });
    }
    let node = Evaluator { arity, work: None }.eval(expr)?;
    debug_assert!(node.exact);
    Ok(node.terms)
}
