//! Grade verdicts: a lower bound from the nilpotence index of the guessed
//! minimal operator, an upper bound from a verified representation.
//!
//! Every verdict holds "through order N": witnesses are checked on that
//! window and guessing uses the whole window of the input series.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{expand, parse_expr, ExprError, RationalExpr, Terms, TruncatedMultiSeries};
use crate::odelocal::linalg::nullspace;
use crate::odelocal::{guess_operator, nil_index, DiffOp, NilReport, OdeError, GUARD};
use crate::par;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::series::{algebraic_series, diagonal, hadamard, hadamard_all, section, AlgebraicSpec, SeriesError, UniSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("no operator of order <= {max_order} and degree <= {max_deg} annihilates the series through order {window}")]
    GuessFailed { max_order: usize, max_deg: usize, window: usize },
    #[error("witness does not reproduce the series through order {window}")]
    WitnessFailed { window: usize },
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    InconsistentBounds { lower: usize, upper: usize },
    #[error("window too small: need truncation order at least {needed}, have {have}")]
    WindowTooSmall { needed: usize, have: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

/// `f = Δ_{arity-1}(expr)`; claims diagonal grade `arity - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalRep {
    expr: RationalExpr,
    arity: usize,
}

impl DiagonalRep {
    pub fn new(expr: RationalExpr, arity: usize) -> Result<Self, GradeError> {
        if arity == 0 {
            return Err(GradeError::InvalidWitness("arity must be at least 1".into()));
        }
        if expr.min_arity() > arity {
            return Err(GradeError::InvalidWitness(format!(
                "expression uses x{} but arity is {arity}",
                expr.min_arity() - 1
            )));
        }
        Ok(DiagonalRep { expr, arity })
    }

    pub fn expr(&self) -> &RationalExpr {
        &self.expr
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn claimed_grade(&self) -> usize {
        self.arity - 1
    }
}

/// `f = h_1 * ... * h_k` with algebraic `h_i`; bounds both grades by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HadamardRepWire")]
pub struct HadamardRep {
    factors: Vec<AlgebraicSpec>,
}

#[derive(Deserialize)]
struct HadamardRepWire {
    factors: Vec<AlgebraicSpec>,
}

impl TryFrom<HadamardRepWire> for HadamardRep {
    type Error = GradeError;

    fn try_from(w: HadamardRepWire) -> Result<Self, GradeError> {
        HadamardRep::new(w.factors)
    }
}

impl HadamardRep {
    pub fn new(factors: Vec<AlgebraicSpec>) -> Result<Self, GradeError> {
        if factors.is_empty() {
            return Err(GradeError::InvalidWitness("a Hadamard representation needs a factor".into()));
        }
        Ok(HadamardRep { factors })
    }

    pub fn factors(&self) -> &[AlgebraicSpec] {
        &self.factors
    }
}

/// JSON: `{"kind": "diagonal", "expr": "...", "arity": n, "claimedGrade": n-1}`
/// or `{"kind": "hadamard", "factors": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Diagonal(DiagonalRep),
    Hadamard(HadamardRep),
}

impl Witness {
    pub fn upper_bound(&self) -> usize {
        match self {
            Witness::Diagonal(d) => d.claimed_grade(),
            Witness::Hadamard(h) => h.factors.len(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum WitnessWire {
    Diagonal {
        expr: String,
        arity: usize,
        #[serde(rename = "claimedGrade", default, skip_serializing_if = "Option::is_none")]
        claimed_grade: Option<usize>,
    },
    Hadamard {
        factors: Vec<AlgebraicSpec>,
    },
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::Diagonal(d) => WitnessWire::Diagonal {
                expr: d.expr.to_string(),
                arity: d.arity,
                claimed_grade: Some(d.claimed_grade()),
            },
            Witness::Hadamard(h) => WitnessWire::Hadamard { factors: h.factors.clone() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match WitnessWire::deserialize(d)? {
            WitnessWire::Diagonal { expr, arity, claimed_grade } => {
                if claimed_grade.is_some_and(|g| g + 1 != arity) {
                    return Err(D::Error::custom("claimedGrade must be arity - 1"));
                }
                let e = parse_expr(&expr, arity).map_err(D::Error::custom)?;
                DiagonalRep::new(e, arity).map(Witness::Diagonal).map_err(D::Error::custom)
            }
            WitnessWire::Hadamard { factors } => HadamardRep::new(factors).map(Witness::Hadamard).map_err(D::Error::custom),
        }
    }
}

/// Nilpotence index of the guessed minimal operator of `f`.
pub fn nil_of_series(f: &UniSeries, max_order: usize, max_deg: usize) -> Result<(NilReport, DiffOp), GradeError> {
    let op = guess_operator(f, max_order, max_deg).ok_or(GradeError::GuessFailed {
        max_order,
        max_deg,
        window: f.trunc(),
    })?;
    let report = nil_index(&op)?;
    Ok((report, op))
}

/// `f = P/Q` with `deg P, deg Q <= max_deg`, `Q(0) = 1`, confirmed on the
/// whole window with at least `GUARD` spare coefficients.
pub fn recognize_rational(f: &UniSeries, max_deg: usize) -> Option<(Poly, Poly)> {
    let n = f.trunc();
    for e in 0..=max_deg {
        if n < 2 * e + 1 + GUARD {
            break;
        }
        // [Q f]_k = 0 for e < k <= n
        let rows: Vec<Vec<Rational>> = ((e + 1)..=n)
            .map(|k| (0..=e).map(|i| f.coeffs()[k - i].clone()).collect())
            .collect();
        let Some(q) = nullspace(rows, e + 1).into_iter().next() else {
            continue;
        };
        let q = Poly::new(q);
        let p = Poly::new(
            (0..=e)
                .map(|k| (0..=k).map(|i| q.coeff(i) * &f.coeffs()[k - i]).sum())
                .collect(),
        );
        let v = q.valuation().expect("nonzero nullspace vector");
        if p.valuation().is_some_and(|pv| pv < v) {
            continue;
        }
        let (p, q) = (p.shift_down(v.min(p.valuation().unwrap_or(v))), q.shift_down(v));
        let c = q.coeff(0).recip();
        return Some((p.scale(&c), q.scale(&c)));
    }
    None
}

/// Diagonal of the expansion on the box `[0, N]^arity` equals `f` through `N`.
pub fn verify_diagonal_rep(rep: &DiagonalRep, f: &UniSeries, order: usize) -> Result<bool, GradeError> {
    if f.trunc() < order {
        return Err(GradeError::WindowTooSmall { needed: order, have: f.trunc() });
    }
    let ms = expand(&rep.expr, &vec![order as i64; rep.arity])?;
    let d = diagonal(&ms, rep.arity - 1)?;
    Ok(d.agrees_with(&f.truncate(order)))
}

/// Iterated Hadamard product of the factors equals `f` through `N`.
pub fn verify_hadamard_rep(rep: &HadamardRep, f: &UniSeries, order: usize) -> Result<bool, GradeError> {
    if f.trunc() < order {
        return Err(GradeError::WindowTooSmall { needed: order, have: f.trunc() });
    }
    let h = hadamard_factors(rep, order)?;
    Ok(h.agrees_with(&f.truncate(order)))
}

fn hadamard_factors(rep: &HadamardRep, order: usize) -> Result<UniSeries, GradeError> {
    let jobs: Vec<_> = rep.factors.iter().map(|s| move || algebraic_series(s, order)).collect();
    let series = par::join_all(jobs).into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(hadamard_all(&series).expect("nonempty"))
}

pub fn verify_witness(w: &Witness, f: &UniSeries, order: usize) -> Result<bool, GradeError> {
    match w {
        Witness::Diagonal(d) => verify_diagonal_rep(d, f, order),
        Witness::Hadamard(h) => verify_hadamard_rep(h, f, order),
    }
}

/// `h_1(x_0) h_2(x_1) ... h_k(x_{k-1})` on the box `[0, N]^k`; its diagonal
/// is the Hadamard product of the factors.
pub fn hadamard_to_disjoint_product(rep: &HadamardRep, order: usize) -> Result<TruncatedMultiSeries, GradeError> {
    let k = rep.factors.len();
    let cap = order as i64;
    let mut acc = TruncatedMultiSeries::with_uniform_cap(k, cap, [(vec![0; k], Rational::one())].into_iter().collect())?;
    for (i, spec) in rep.factors.iter().enumerate() {
        let s = algebraic_series(spec, order)?;
        let terms: Terms = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (vec![e as i64], c.clone()))
            .collect();
        let one_var = TruncatedMultiSeries::with_uniform_cap(1, cap, terms)?;
        acc = acc.mul(&one_var.embed(k, i, cap)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowerEvidence {
    Nil { report: NilReport, operator: DiffOp },
    Rational { numerator: Poly, denominator: Poly },
}

impl Serialize for LowerEvidence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        let strings = |p: &Poly| p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>();
        match self {
            LowerEvidence::Nil { report, operator } => {
                m.serialize_entry("kind", "nil")?;
                m.serialize_entry("nil", &report.nil)?;
                let exps: Vec<(String, usize)> = report.exponents.iter().map(|(q, k)| (q.to_string(), *k)).collect();
                m.serialize_entry("exponents", &exps)?;
                let logs: Vec<usize> = report.basis.iter().map(|b| b.log_degree()).collect();
                m.serialize_entry("logDegrees", &logs)?;
                m.serialize_entry("operator", operator)?;
            }
            LowerEvidence::Rational { numerator, denominator } => {
                m.serialize_entry("kind", "rational")?;
                m.serialize_entry("numerator", &strings(numerator))?;
                m.serialize_entry("denominator", &strings(denominator))?;
            }
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpperEvidence {
    Witness(Witness),
    Rational,
}

impl Serialize for UpperEvidence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperEvidence::Witness(w) => w.serialize(s),
            UpperEvidence::Rational => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("kind", "rational")?;
                m.end()
            }
        }
    }
}

/// `lower <= dg(f) <= upper` through order `window`. `upper` is `None`
/// without a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GradeBounds {
    pub lower: usize,
    pub upper: Option<usize>,
    pub window: usize,
    pub lower_evidence: LowerEvidence,
    pub upper_evidence: Option<UpperEvidence>,
}

/// Verifies the witness (if any) through `check_order`, then bounds the
/// grade. A series recognized as rational gets `(0, 0)`; otherwise the
/// lower bound is the nilpotence index of the guessed operator.
pub fn grade_bounds(
    f: &UniSeries,
    witness: Option<&Witness>,
    max_order: usize,
    max_deg: usize,
    check_order: usize,
) -> Result<GradeBounds, GradeError> {
    if let Some(w) = witness {
        if !verify_witness(w, f, check_order)? {
            return Err(GradeError::WitnessFailed { window: check_order });
        }
    }
    if let Some((numerator, denominator)) = recognize_rational(f, max_deg) {
        return Ok(GradeBounds {
            lower: 0,
            upper: Some(0),
            window: f.trunc(),
            lower_evidence: LowerEvidence::Rational { numerator, denominator },
            upper_evidence: Some(UpperEvidence::Rational),
        });
    }
    let (report, operator) = nil_of_series(f, max_order, max_deg)?;
    let lower = report.nil;
    let upper = witness.map(Witness::upper_bound);
    if let Some(u) = upper {
        if lower > u {
            return Err(GradeError::InconsistentBounds { lower, upper: u });
        }
    }
    Ok(GradeBounds {
        lower,
        upper,
        window: f.trunc(),
        lower_evidence: LowerEvidence::Nil { report, operator },
        upper_evidence: witness.cloned().map(UpperEvidence::Witness),
    })
}

/// Modulus `m` with residue sets covering `0..m` such that the sections of
/// `f` on `F` and of `g` on `G` vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroDivisorWitness {
    pub m: usize,
    #[serde(rename = "F")]
    pub f_residues: Vec<usize>,
    #[serde(rename = "G")]
    pub g_residues: Vec<usize>,
}

/// Smallest `m <= m_max` for which the zero sections of `f` and `g` cover
/// every residue, with `F` and `G` maximal. `None` if `f * g` is nonzero
/// through `N` or no such `m` exists; truncations cannot certify the
/// converse.
pub fn zero_divisor_witness(f: &UniSeries, g: &UniSeries, m_max: usize, order: usize) -> Option<ZeroDivisorWitness> {
    let n = order.min(f.trunc()).min(g.trunc());
    let (f, g) = (f.truncate(n), g.truncate(n));
    if !hadamard(&f, &g).is_zero() {
        return None;
    }
    for m in 1..=m_max.min(n + 1) {
        let zero_residues = |s: &UniSeries| -> Vec<usize> {
            (0..m).filter(|&r| section(s, r, m).map(|x| x.is_zero()).unwrap_or(false)).collect()
        };
        let fr = zero_residues(&f);
        let gr = zero_residues(&g);
        if (0..m).all(|r| fr.contains(&r) || gr.contains(&r)) {
            return Some(ZeroDivisorWitness { m, f_residues: fr, g_residues: gr });
        }
    }
    None
}
