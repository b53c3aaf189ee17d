//! The worked examples: Apéry numbers with Straub's representation, the
//! `nF(n-1)(1/2, ...; 1, ...)` ladder, the banana family and the section
//! construction, each with the data needed to check it end to end.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::expr::{parse_expr, RationalExpr};
use crate::grade::{grade_bounds, nil_of_series, DiagonalRep, GradeBounds, HadamardRep, Witness};
use crate::hypergeom::{hg_coeffs, hg_operator, HypergeomParams};
use crate::odelocal::{DiffOp, OpForm};
use crate::poly::Poly;
use crate::rational::{int, ratio, Rational};
use crate::series::{binomial_power_series, recompose, section, AlgebraicSpec, UniSeries};

/// Largest `ℓ` the catalog lists; the free functions accept any `ℓ >= 1`.
pub const BANANA_MAX: usize = 3;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `A(n) = Σ_k C(n,k)^2 C(n+k,k)^2` for `n <= order`.
pub fn apery_numbers(order: usize) -> Vec<BigInt> {
    (0..=order as u64)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let t = binomial(n, k) * binomial(n + k, k);
                    &t * &t
                })
                .sum()
        })
        .collect()
}

pub fn apery_series(order: usize) -> UniSeries {
    UniSeries::new(apery_numbers(order).into_iter().map(Rational::from_integer).collect())
}

/// `(x^4 - 34x^3 + x^2) D^3 + (6x^3 - 153x^2 + 3x) D^2 + (7x^2 - 112x + 1) D + (x - 5)`.
pub fn apery_operator() -> DiffOp {
    DiffOp::from_int_coeffs(
        OpForm::Dx,
        &[&[-5, 1], &[1, -112, 7], &[0, 3, -153, 6], &[0, 0, 1, -34, 1]],
    )
    .expect("nonzero")
}

/// `1/((1-x0-x1)(1-x3-x2) - x0 x1 x2 x3)` in four variables.
///
/// The sign of the quartic term matters: with `+` the coefficient of
/// `x0 x1 x2 x3` is `4 - 1 = 3`, not `A(1) = 5`.
pub fn straub_rep() -> DiagonalRep {
    let e = parse_expr("1/((1-x0-x1)*(1-x3-x2)-x0*x1*x2*x3)", 4).expect("well formed");
    DiagonalRep::new(e, 4).expect("arity 4")
}

/// `B_ℓ(n) = Σ_{r_0+...+r_ℓ=n} multinomial(n; r)^2`, computed as
/// `n!^2 [t^n] (Σ_r t^r / r!^2)^(ℓ+1)`.
pub fn banana_terms(l: usize, order: usize) -> UniSeries {
    assert!(l >= 1, "banana family starts at ℓ = 1");
    let mut fact = vec![BigInt::one()];
    for i in 1..=order {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    let base = UniSeries::new((0..=order).map(|r| Rational::new(BigInt::one(), &fact[r] * &fact[r])).collect());
    let mut acc = UniSeries::one(order);
    for _ in 0..=l {
        acc = acc.mul(&base);
    }
    UniSeries::new(
        acc.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from_integer(&fact[n] * &fact[n]))
            .collect(),
    )
}

fn banana_arity(l: usize) -> usize {
    l + 1
}

/// `g_ℓ = (x1 + ... + xℓ + 1)(1/x1 + ... + 1/xℓ + 1)`, in variables
/// `x1 .. xℓ` so that `x0` is free for the diagonal representation.
pub fn banana_laurent(l: usize) -> RationalExpr {
    assert!(l >= 1, "banana family starts at ℓ = 1");
    let vars: Vec<String> = (1..=l).map(|i| format!("x{i}")).collect();
    let inv: Vec<String> = vars.iter().map(|v| format!("1/{v}")).collect();
    let text = format!("({}+1)*({}+1)", vars.join("+"), inv.join("+"));
    parse_expr(&text, banana_arity(l)).expect("well formed")
}

/// `1/(1 - x0 x1 ... xℓ g_ℓ)` with the Laurent factor cleared:
/// `x1 ... xℓ g_ℓ = (x1 + ... + xℓ + 1)(Σ_i Π_{j≠i} x_j + x1 ... xℓ)`.
pub fn banana_diagonal_rep(l: usize) -> DiagonalRep {
    assert!(l >= 1, "banana family starts at ℓ = 1");
    let vars: Vec<String> = (1..=l).map(|i| format!("x{i}")).collect();
    let cofactors: Vec<String> = (0..l)
        .map(|i| {
            let rest: Vec<&str> = (0..l).filter(|&j| j != i).map(|j| vars[j].as_str()).collect();
            if rest.is_empty() {
                "1".to_string()
            } else {
                rest.join("*")
            }
        })
        .collect();
    let text = format!(
        "1/(1-x0*({}+1)*({}+{}))",
        vars.join("+"),
        cofactors.join("+"),
        vars.join("*")
    );
    let e = parse_expr(&text, banana_arity(l)).expect("well formed");
    DiagonalRep::new(e, banana_arity(l)).expect("arity matches")
}

/// `f = e_{0,2}(1/(1-x))(x^2) + x e_{1,2}(√(1-x))(x^2)` and
/// `g = e_{0,2}(√(1-x))(x^2) + x e_{1,2}(1/(1-x))(x^2)`, both through `order`.
pub fn section_example_pair(order: usize) -> (UniSeries, UniSeries) {
    let geo = UniSeries::geometric(order);
    let root = binomial_power_series(&int(-1), &ratio(1, 2), order);
    let sec = |s: &UniSeries, r| section(s, r, 2).expect("r < 2 and window covers r");
    let f = recompose(&[sec(&geo, 0), sec(&root, 1)]).expect("two sections");
    let g = recompose(&[sec(&root, 0), sec(&geo, 1)]).expect("two sections");
    (f.truncate(order), g.truncate(order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Apery,
    HalfLadder { n: usize },
    Banana { l: usize },
    Geometric,
    CentralBinomial,
}

impl Family {
    pub fn series(&self, order: usize) -> UniSeries {
        match *self {
            Family::Apery => apery_series(order),
            Family::HalfLadder { n } => hg_coeffs(&HypergeomParams::half_ladder(n), order).expect("betas are 1"),
            Family::Banana { l } => banana_terms(l, order),
            Family::Geometric => UniSeries::geometric(order),
            Family::CentralBinomial => binomial_power_series(&int(-4), &ratio(-1, 2), order),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub family: Family,
    /// Default window for the univariate series and for guessing.
    pub window: usize,
    pub max_order: usize,
    pub max_deg: usize,
    pub witness: Option<Witness>,
    /// Order through which the witness is verified.
    pub check_order: usize,
    pub operator: Option<DiffOp>,
    pub expected_nil: usize,
    pub expected_lower: usize,
    pub expected_upper: Option<usize>,
}

impl CatalogEntry {
    pub fn series(&self, order: usize) -> UniSeries {
        self.family.series(order)
    }

    pub fn diagonal_rep(&self) -> Option<&DiagonalRep> {
        match &self.witness {
            Some(Witness::Diagonal(d)) => Some(d),
            _ => None,
        }
    }

    pub fn hadamard_rep(&self) -> Option<&HadamardRep> {
        match &self.witness {
            Some(Witness::Hadamard(h)) => Some(h),
            _ => None,
        }
    }
}

fn inv_sqrt() -> AlgebraicSpec {
    AlgebraicSpec::binomial(int(-1), ratio(-1, 2))
}

/// Every entry. Windows satisfy the guessing precondition
/// `window >= (r+1)(d+1) + GUARD`.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = vec![CatalogEntry {
        name: "apery".into(),
        description: "Apéry numbers with Straub's 4-variable representation".into(),
        family: Family::Apery,
        window: 30,
        max_order: 3,
        max_deg: 4,
        witness: Some(Witness::Diagonal(straub_rep())),
        check_order: 8,
        operator: Some(apery_operator()),
        expected_nil: 3,
        expected_lower: 3,
        expected_upper: Some(3),
    }];
    for n in 1..=4 {
        let p = HypergeomParams::half_ladder(n);
        out.push(CatalogEntry {
            name: format!("hg-half-{n}"),
            description: format!("hypergeometric series with parameters {p}"),
            family: Family::HalfLadder { n },
            window: 40,
            max_order: n,
            max_deg: n + 1,
            witness: Some(Witness::Hadamard(HadamardRep::new(vec![inv_sqrt(); n]).expect("n >= 1"))),
            check_order: 40,
            operator: Some(hg_operator(&p)),
            expected_nil: n,
            expected_lower: n,
            expected_upper: Some(n),
        });
    }
    for l in 1..=BANANA_MAX {
        out.push(CatalogEntry {
            name: format!("banana-{l}"),
            description: format!("sums of squared multinomials with {} parts", l + 1),
            family: Family::Banana { l },
            window: (l + 1) * (2 * l + 3) + 14,
            max_order: l,
            max_deg: 2 * l + 2,
            witness: Some(Witness::Diagonal(banana_diagonal_rep(l))),
            check_order: 8,
            operator: None,
            expected_nil: l,
            expected_lower: l,
            expected_upper: Some(l),
        });
    }
    out.push(CatalogEntry {
        name: "geometric".into(),
        description: "1/(1-x), rational".into(),
        family: Family::Geometric,
        window: 20,
        max_order: 1,
        max_deg: 1,
        witness: Some(Witness::Diagonal(
            DiagonalRep::new(parse_expr("1/(1-x0)", 1).expect("well formed"), 1).expect("arity 1"),
        )),
        check_order: 20,
        operator: Some(DiffOp::from_int_coeffs(OpForm::Dx, &[&[-1], &[1, -1]]).expect("nonzero")),
        expected_nil: 1,
        expected_lower: 0,
        expected_upper: Some(0),
    });
    out.push(CatalogEntry {
        name: "central-binomial".into(),
        description: "central binomial coefficients as the diagonal of 1/(1-x0-x1)".into(),
        family: Family::CentralBinomial,
        window: 30,
        max_order: 1,
        max_deg: 2,
        witness: Some(Witness::Diagonal(
            DiagonalRep::new(parse_expr("1/(1-x0-x1)", 2).expect("well formed"), 2).expect("arity 2"),
        )),
        check_order: 20,
        operator: Some(DiffOp::new(OpForm::Dx, vec![Poly::constant(int(-2)), Poly::from_ints(&[1, -4])]).expect("nonzero")),
        expected_nil: 1,
        expected_lower: 1,
        expected_upper: Some(1),
    });
    out
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}

/// Outcome of running one entry; serializes as the grade verdict plus the
/// entry's own checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogVerdict {
    pub entry: String,
    #[serde(flatten)]
    pub bounds: GradeBounds,
    pub nil: usize,
    pub expected_nil: usize,
    pub expected_lower: usize,
    pub expected_upper: Option<usize>,
    pub operator_annihilates: Option<bool>,
    pub passed: bool,
}

/// Verifies the witness, bounds the grade, recomputes `Nil` from the
/// guessed operator and applies the attached operator, all at `window`
/// (default: the entry's window). Witness checks use
/// `min(check_order, window)`.
pub fn run_entry(e: &CatalogEntry, window: Option<usize>) -> Result<CatalogVerdict, Error> {
    let w = window.unwrap_or(e.window);
    let f = e.series(w);
    let bounds = grade_bounds(&f, e.witness.as_ref(), e.max_order, e.max_deg, e.check_order.min(w))?;
    let (report, _) = nil_of_series(&f, e.max_order, e.max_deg)?;
    let operator_annihilates = match &e.operator {
        Some(op) => Some(op.apply(&f)?.is_zero()),
        None => None,
    };
    let passed = report.nil == e.expected_nil
        && bounds.lower == e.expected_lower
        && bounds.upper == e.expected_upper
        && operator_annihilates != Some(false);
    Ok(CatalogVerdict {
        entry: e.name.clone(),
        bounds,
        nil: report.nil,
        expected_nil: e.expected_nil,
        expected_lower: e.expected_lower,
        expected_upper: e.expected_upper,
        operator_annihilates,
        passed,
    })
}
