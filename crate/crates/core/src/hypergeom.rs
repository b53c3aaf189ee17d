//! Hypergeometric parameters `(α; β)` with `β_n = 1`: coefficients, the
//! operator `L(α; β)`, resonance, contraction, height and the Jordan
//! structure of local monodromy predicted by Levelt's theorem.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::odelocal::{DiffOp, OpForm};
use crate::poly::Poly;
use crate::rational::{frac, int, is_integer, parse_rational_list, Rational};
use crate::series::UniSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergeomError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("(beta_{j})_{i} vanishes: the coefficient of x^{i} has a zero denominator")]
    PochhammerZeroDenominator { j: usize, i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypergeomParams {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
}

impl HypergeomParams {
    /// `beta` carries the trailing 1 explicitly.
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self, HypergeomError> {
        if alpha.is_empty() {
            return Err(HypergeomError::InvalidParams("need n >= 1".into()));
        }
        if alpha.len() != beta.len() {
            return Err(HypergeomError::InvalidParams(format!(
                "{} alphas but {} betas",
                alpha.len(),
                beta.len()
            )));
        }
        if !beta.last().expect("nonempty").is_one() {
            return Err(HypergeomError::InvalidParams("the last beta must be 1".into()));
        }
        Ok(HypergeomParams { alpha, beta })
    }

    /// `α = (1/2, ..., 1/2)`, `β = (1, ..., 1)`.
    pub fn half_ladder(n: usize) -> Self {
        HypergeomParams::new(vec![Rational::new(1.into(), 2.into()); n], vec![Rational::one(); n])
            .expect("valid by construction")
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }
}

impl FromStr for HypergeomParams {
    type Err = HypergeomError;

    /// `"a1,...,an;b1,...,bn"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(';')
            .ok_or_else(|| HypergeomError::InvalidParams("expected 'alphas;betas'".into()))?;
        let bad = |e: crate::rational::ParseRationalError| HypergeomError::InvalidParams(e.to_string());
        HypergeomParams::new(parse_rational_list(a).map_err(bad)?, parse_rational_list(b).map_err(bad)?)
    }
}

fn join(qs: &[Rational]) -> String {
    qs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for HypergeomParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", join(&self.alpha), join(&self.beta))
    }
}

/// `Π (α_k)_i / Π (β_k)_i` for `i <= N`, via the ratio
/// `c_{i+1} / c_i = Π (α_k + i) / Π (β_k + i)`.
pub fn hg_coeffs(p: &HypergeomParams, order: usize) -> Result<UniSeries, HypergeomError> {
    for (j, b) in p.beta.iter().enumerate() {
        if is_integer(b) && !b.is_positive() {
            let k = (-b).to_integer();
            let i = usize::try_from(k + 1).expect("small");
            if i <= order {
                return Err(HypergeomError::PochhammerZeroDenominator { j: j + 1, i });
            }
        }
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    out.push(c.clone());
    for i in 0..order {
        let shift = int(i as i64);
        let num = p.alpha.iter().fold(Rational::one(), |acc, a| acc * (a + &shift));
        let den = p.beta.iter().fold(Rational::one(), |acc, b| acc * (b + &shift));
        c = c * num / den;
        out.push(c.clone());
    }
    Ok(UniSeries::new(out))
}

fn product_of_shifts(shifts: impl Iterator<Item = Rational>) -> Poly {
    shifts.fold(Poly::one(), |acc, s| &acc * &Poly::linear(s))
}

/// `Π_j (θ + β_j - 1) - x Π_i (θ + α_i)` for arbitrary parameter lists.
pub fn theta_operator(alpha: &[Rational], beta: &[Rational]) -> DiffOp {
    let q = product_of_shifts(beta.iter().map(|b| b - Rational::one()));
    let p = product_of_shifts(alpha.iter().cloned());
    let r = q.degree().unwrap_or(0).max(p.degree().unwrap_or(0));
    let coeffs = (0..=r)
        .map(|j| Poly::new(vec![q.coeff(j), -p.coeff(j)]))
        .collect();
    DiffOp::new(OpForm::Theta, coeffs).expect("the x-part is monic")
}

/// `L(α; β) = θ Π_{j<n} (θ + β_j - 1) - x Π_i (θ + α_i)`.
pub fn hg_operator(p: &HypergeomParams) -> DiffOp {
    theta_operator(&p.alpha, &p.beta)
}

/// Pairs `(i, j, α_i - β_j)` (1-based) with an integer difference.
pub fn resonant_pairs(p: &HypergeomParams) -> Vec<(usize, usize, i64)> {
    resonant_in(&p.alpha, &p.beta)
        .into_iter()
        .map(|(i, j, d)| (i + 1, j + 1, d))
        .collect()
}

fn resonant_in(alpha: &[Rational], beta: &[Rational]) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for (i, a) in alpha.iter().enumerate() {
        for (j, b) in beta.iter().enumerate() {
            let d = a - b;
            if is_integer(&d) {
                let d = i64::try_from(d.to_integer()).expect("parameter difference fits in i64");
                out.push((i, j, d));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorSide {
    /// `(θ + γ) L'`
    Left,
    /// `L' (θ + δ)`
    Right,
}

/// One removed pair. `alpha`/`beta` are the lists before removal and
/// `i`, `j` are 0-based positions in them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub i: usize,
    pub j: usize,
    pub diff: i64,
    pub side: FactorSide,
    pub shift: Rational,
}

impl ContractionStep {
    /// Whether the pair was first moved to difference `-1` or `0`.
    pub fn shifted(&self) -> bool {
        self.diff < -1 || self.diff > 0
    }

    fn reduced(&self) -> (Vec<Rational>, Vec<Rational>) {
        let mut a = self.alpha.clone();
        let mut b = self.beta.clone();
        a.remove(self.i);
        b.remove(self.j);
        (a, b)
    }

    /// For an unshifted pair, checks the exact operator identity
    /// `L(α; β) = L(α'; β') (θ + δ)` (difference `-1`) or
    /// `L(α; β) = (θ + γ) L(α'; β')` (difference `0`). `None` for shifted
    /// pairs, whose relation is an isomorphism of solution systems rather
    /// than an operator identity.
    pub fn factorization_holds(&self) -> Option<bool> {
        if self.shifted() {
            return None;
        }
        let full = theta_operator(&self.alpha, &self.beta);
        let (a, b) = self.reduced();
        let reduced = theta_operator(&a, &b);
        let factor = DiffOp::theta_poly(&Poly::linear(self.shift.clone())).expect("monic");
        let product = match self.side {
            FactorSide::Right => reduced.multiply(&factor),
            FactorSide::Left => factor.multiply(&reduced),
        };
        Some(product == full)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub gammas: Vec<Rational>,
    pub deltas: Vec<Rational>,
    pub steps: Vec<ContractionStep>,
}

/// The step removing `(α_i, β_j)`; `None` unless `α_i - β_j` is an integer.
pub fn contraction_step(alpha: &[Rational], beta: &[Rational], i: usize, j: usize) -> Option<ContractionStep> {
    let d = &alpha[i] - &beta[j];
    if !d.is_integer() {
        return None;
    }
    let diff = i64::try_from(d.to_integer()).ok()?;
    let (side, shift) = if diff <= -1 {
        (FactorSide::Right, &beta[j] - Rational::one())
    } else {
        (FactorSide::Left, &alpha[i] - Rational::one())
    };
    Some(ContractionStep {
        alpha: alpha.to_vec(),
        beta: beta.to_vec(),
        i,
        j,
        diff,
        side,
        shift,
    })
}

/// Removes resonant pairs, smallest `(i, j)` first, until `(α̃; β̃)` is
/// nonresonant.
///
/// With `d = α_i - β_j`: `d = -1` gives a right factor `θ + α_i`; `d = 0`
/// gives a left factor `θ + β_j - 1`; `d <= -2` first moves `α_i` to
/// `β_j - 1` and `d >= 1` first moves `β_j` to `α_i`, after which the base
/// cases apply.
pub fn contract(p: &HypergeomParams) -> Contraction {
    let mut alpha = p.alpha.clone();
    let mut beta = p.beta.clone();
    let mut gammas = Vec::new();
    let mut deltas = Vec::new();
    let mut steps = Vec::new();
    while let Some(&(i, j, _)) = resonant_in(&alpha, &beta).first() {
        let step = contraction_step(&alpha, &beta, i, j).expect("resonant pair");
        match step.side {
            FactorSide::Right => deltas.push(step.shift.clone()),
            FactorSide::Left => gammas.push(step.shift.clone()),
        }
        alpha.remove(i);
        beta.remove(j);
        steps.push(step);
    }
    Contraction { alpha, beta, gammas, deltas, steps }
}

/// `#{j : β_j ∈ ℤ} - #{i : α_i ∈ ℤ}`.
pub fn height(p: &HypergeomParams) -> i64 {
    count_integers(&p.beta) as i64 - count_integers(&p.alpha) as i64
}

fn count_integers(qs: &[Rational]) -> usize {
    qs.iter().filter(|q| is_integer(q)).count()
}

/// A point `exp(2πi v)` on the unit circle, stored as `v ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RotationNumber(Rational);

impl RotationNumber {
    pub fn new(q: &Rational) -> Self {
        RotationNumber(frac(q))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One Jordan block per distinct rotation, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanStructure {
    pub blocks: Vec<(RotationNumber, usize)>,
}

impl JordanStructure {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.1).max().unwrap_or(0)
    }

    /// Lines such as `rot=0: size 3`.
    pub fn pretty(&self) -> String {
        self.blocks
            .iter()
            .map(|(r, s)| format!("rot={r}: size {s}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Serialize for JordanStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Block {
            rotation: String,
            size: usize,
        }
        let blocks: Vec<Block> = self
            .blocks
            .iter()
            .map(|(r, n)| Block { rotation: r.to_string(), size: *n })
            .collect();
        blocks.serialize(s)
    }
}

/// Companion-matrix Jordan structure: a single block per distinct root,
/// of size equal to its multiplicity.
pub fn levelt_jordan(rotations: &[RotationNumber]) -> JordanStructure {
    let mut counts: BTreeMap<RotationNumber, usize> = BTreeMap::new();
    for r in rotations {
        *counts.entry(r.clone()).or_default() += 1;
    }
    JordanStructure { blocks: counts.into_iter().collect() }
}

/// Monodromy at 0 is governed by the `β`s, at ∞ by the `α`s.
pub fn jordan_at_zero(p: &HypergeomParams) -> JordanStructure {
    levelt_jordan(&p.beta.iter().map(RotationNumber::new).collect::<Vec<_>>())
}

pub fn jordan_at_infinity(p: &HypergeomParams) -> JordanStructure {
    levelt_jordan(&p.alpha.iter().map(RotationNumber::new).collect::<Vec<_>>())
}

/// `max(#{β̃_j ∈ ℤ}, #{α̃_i ∈ ℤ})` after contraction.
pub fn nil_lower_bound_from_levelt(p: &HypergeomParams) -> usize {
    let c = contract(p);
    count_integers(&c.beta).max(count_integers(&c.alpha))
}
