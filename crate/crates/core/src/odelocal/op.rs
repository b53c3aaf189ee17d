use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::OdeError;
use crate::poly::Poly;
use crate::rational::{parse_rational, Rational};
use crate::series::UniSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpForm {
    Theta,
    Dx,
}

/// `Σ_i coeffs[i](x) ∂^i` with `∂ = θ` or `∂ = d/dx` according to `form`.
/// The leading polynomial is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    form: OpForm,
    coeffs: Vec<Poly>,
}

/// Stirling numbers of the second kind `S2[j][k]`, `j, k <= n`.
fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for j in 1..=n {
        for k in 1..=j {
            s[j][k] = &s[j - 1][k - 1] + BigInt::from(k) * &s[j - 1][k];
        }
    }
    s
}

/// Signed Stirling numbers of the first kind: `x^k D^k = Σ_j s[k][j] θ^j`.
fn stirling1(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = &s[k - 1][j - 1] - BigInt::from(k - 1) * &s[k - 1][j];
        }
    }
    s
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn add_at(acc: &mut Vec<Poly>, i: usize, p: &Poly) {
    if acc.len() <= i {
        acc.resize(i + 1, Poly::zero());
    }
    acc[i] = &acc[i] + p;
}

impl DiffOp {
    pub fn new(form: OpForm, mut coeffs: Vec<Poly>) -> Result<Self, OdeError> {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(OdeError::ZeroOperator);
        }
        Ok(DiffOp { form, coeffs })
    }

    /// Integer coefficient lists, lowest degree first.
    pub fn from_int_coeffs(form: OpForm, coeffs: &[&[i64]]) -> Result<Self, OdeError> {
        DiffOp::new(form, coeffs.iter().map(|c| Poly::from_ints(c)).collect())
    }

    pub fn theta() -> Self {
        DiffOp { form: OpForm::Theta, coeffs: vec![Poly::zero(), Poly::one()] }
    }

    pub fn dx() -> Self {
        DiffOp { form: OpForm::Dx, coeffs: vec![Poly::zero(), Poly::one()] }
    }

    /// Multiplication by a nonzero polynomial, as an order-0 operator.
    pub fn multiplication(form: OpForm, p: Poly) -> Result<Self, OdeError> {
        DiffOp::new(form, vec![p])
    }

    /// `q(θ)` for a polynomial `q` with constant coefficients.
    pub fn theta_poly(q: &Poly) -> Result<Self, OdeError> {
        DiffOp::new(OpForm::Theta, q.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    pub fn form(&self) -> OpForm {
        self.form
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().expect("nonzero operator")
    }

    /// Largest x-degree among the coefficients.
    pub fn x_degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// d/dx-form, using `θ^j = Σ_k S2(j, k) x^k D^k`. Exact, no rescaling.
    pub fn to_dx_form(&self) -> DiffOp {
        if self.form == OpForm::Dx {
            return self.clone();
        }
        let r = self.order();
        let s2 = stirling2(r);
        let mut out = vec![Poly::zero(); r + 1];
        for (j, p) in self.coeffs.iter().enumerate() {
            for k in 0..=j {
                if s2[j][k].is_zero() {
                    continue;
                }
                let term = p.scale(&Rational::from_integer(s2[j][k].clone())).shift_up(k);
                out[k] = &out[k] + &term;
            }
        }
        DiffOp::new(OpForm::Dx, out).expect("basis change keeps the operator nonzero")
    }

    /// θ-form of this operator. A d/dx-form operator is multiplied on the
    /// left by `x^order` and then the common power of `x` is cleared.
    pub fn to_theta_form(&self) -> DiffOp {
        self.to_theta_form_with_shift().0
    }

    /// As [`DiffOp::to_theta_form`], also returning `k` with
    /// `result = x^k * self`.
    pub fn to_theta_form_with_shift(&self) -> (DiffOp, i64) {
        if self.form == OpForm::Theta {
            return (self.clone(), 0);
        }
        let r = self.order();
        let s1 = stirling1(r);
        let mut out = vec![Poly::zero(); r + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            let lifted = a.shift_up(r - k);
            for j in 0..=k {
                if s1[k][j].is_zero() {
                    continue;
                }
                out[j] = &out[j] + &lifted.scale(&Rational::from_integer(s1[k][j].clone()));
            }
        }
        let op = DiffOp::new(OpForm::Theta, out).expect("basis change keeps the operator nonzero");
        let (op, v) = op.clear_x_power();
        (op, r as i64 - v as i64)
    }

    /// Divides every coefficient by the largest common power of `x`.
    /// Only meaningful in θ-form, where `x^v` commutes past nothing; callers
    /// use it as a left factor.
    pub(crate) fn clear_x_power(&self) -> (DiffOp, usize) {
        let v = self.coeffs.iter().filter_map(Poly::valuation).min().unwrap_or(0);
        let coeffs = self.coeffs.iter().map(|p| p.shift_down(v)).collect();
        (DiffOp { form: self.form, coeffs }, v)
    }

    /// θ-form with the common power of `x` cleared from the left.
    pub fn theta_normal_form(&self) -> DiffOp {
        self.to_theta_form().clear_x_power().0
    }

    pub fn in_form(&self, form: OpForm) -> DiffOp {
        match form {
            OpForm::Theta => self.to_theta_form(),
            OpForm::Dx => self.to_dx_form(),
        }
    }

    /// Composition `self ∘ other`. Mixed forms are composed in d/dx-form.
    pub fn multiply(&self, other: &DiffOp) -> DiffOp {
        match (self.form, other.form) {
            (OpForm::Theta, OpForm::Theta) => self.multiply_theta(other),
            (OpForm::Dx, OpForm::Dx) => self.multiply_dx(other),
            _ => self.to_dx_form().multiply_dx(&other.to_dx_form()),
        }
    }

    /// Uses `θ^i x^m = x^m (θ + m)^i`.
    fn multiply_theta(&self, other: &DiffOp) -> DiffOp {
        let mut out: Vec<Poly> = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                for (m, c) in q.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let base = p.shift_up(m).scale(c);
                    for l in 0..=i {
                        let w = Rational::from_integer(binomial(i, l) * BigInt::from(m).pow((i - l) as u32));
                        if w.is_zero() {
                            continue;
                        }
                        add_at(&mut out, l + j, &base.scale(&w));
                    }
                }
            }
        }
        DiffOp::new(OpForm::Theta, out).expect("product of nonzero operators is nonzero")
    }

    /// Uses Leibniz: `D^i b = Σ_l C(i, l) b^(l) D^(i-l)`.
    fn multiply_dx(&self, other: &DiffOp) -> DiffOp {
        let mut out: Vec<Poly> = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut db = b.clone();
                for l in 0..=i {
                    if db.is_zero() {
                        break;
                    }
                    let w = Rational::from_integer(binomial(i, l));
                    add_at(&mut out, i - l + j, &(a * &db).scale(&w));
                    db = db.derivative();
                }
            }
        }
        DiffOp::new(OpForm::Dx, out).expect("product of nonzero operators is nonzero")
    }

    /// Image of `f`. In d/dx-form the window shrinks by the order; in θ-form
    /// it is kept.
    pub fn apply(&self, f: &UniSeries) -> Result<UniSeries, OdeError> {
        let r = self.order();
        if f.trunc() < r {
            return Err(OdeError::WindowTooSmall { needed: r, have: f.trunc() });
        }
        match self.form {
            OpForm::Dx => {
                let mut derivs = vec![f.clone()];
                for _ in 0..r {
                    let d = derivs.last().unwrap().derivative();
                    derivs.push(d);
                }
                let n = f.trunc() - r;
                Ok(UniSeries::from_fn(n, |k| {
                    let mut s = Rational::zero();
                    for (i, a) in self.coeffs.iter().enumerate() {
                        for (e, c) in a.coeffs().iter().enumerate().take(k + 1) {
                            if !c.is_zero() {
                                s += c * &derivs[i].coeffs()[k - e];
                            }
                        }
                    }
                    s
                }))
            }
            OpForm::Theta => {
                let n = f.trunc();
                Ok(UniSeries::from_fn(n, |k| {
                    let mut s = Rational::zero();
                    for (j, p) in self.coeffs.iter().enumerate() {
                        for (e, c) in p.coeffs().iter().enumerate().take(k + 1) {
                            if !c.is_zero() {
                                let w = BigInt::from(k - e).pow(j as u32);
                                s += c * &f.coeffs()[k - e] * Rational::from_integer(w);
                            }
                        }
                    }
                    s
                }))
            }
        }
    }

    /// Fuchs criterion at 0: in θ-form with the common power of `x` cleared,
    /// the leading coefficient does not vanish at 0. Equivalent to
    /// `ord(a_i) >= ord(a_r) - (r - i)` for the d/dx coefficients.
    pub fn is_regular_singular_at_zero(&self) -> bool {
        let t = self.theta_normal_form();
        !t.leading().coeff(0).is_zero()
    }

    /// `P_k(θ)` with `L = Σ_k x^k P_k(θ)`, for a θ-form operator.
    pub fn theta_slices(&self) -> Vec<Poly> {
        debug_assert_eq!(self.form, OpForm::Theta);
        let k_max = self.x_degree();
        (0..=k_max)
            .map(|k| Poly::new(self.coeffs.iter().map(|p| p.coeff(k)).collect()))
            .collect()
    }

    /// Scales to integer coefficients with gcd 1, choosing the sign that
    /// makes the lowest nonzero coefficient of the leading polynomial
    /// positive.
    pub fn normalized(&self) -> DiffOp {
        let all: Vec<&Rational> = self.coeffs.iter().flat_map(|p| p.coeffs()).collect();
        let l = all.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let g = all
            .iter()
            .fold(BigInt::zero(), |acc, q| acc.gcd(&(q.numer() * (&l / q.denom()))));
        let lead_low = self
            .leading()
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .expect("leading polynomial is nonzero");
        let sign = if lead_low.is_negative() { -BigInt::one() } else { BigInt::one() };
        let factor = Rational::new(l * sign, g);
        DiffOp { form: self.form, coeffs: self.coeffs.iter().map(|p| p.scale(&factor)).collect() }
    }

    /// Equal after bringing both to d/dx-form and normalizing content.
    pub fn equal_up_to_content(&self, other: &DiffOp) -> bool {
        self.to_dx_form().normalized() == other.to_dx_form().normalized()
    }

    pub fn to_wire(&self) -> DiffOpWire {
        DiffOpWire {
            form: self.form,
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn from_wire(w: &DiffOpWire) -> Result<Self, OdeError> {
        let coeffs = w
            .coeffs
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Poly::new)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| OdeError::Invalid(e.to_string()))?;
        DiffOp::new(w.form, coeffs)
    }

    /// Human-readable form such as `(x^2 - x)*D^2 + (1)`, highest order
    /// first, with `θ` or `D`.
    pub fn pretty(&self) -> String {
        let sym = match self.form {
            OpForm::Theta => "θ",
            OpForm::Dx => "D",
        };
        let mut parts = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let op = match i {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{i}"),
            };
            let c = p.display_in("x");
            parts.push(match (op.is_empty(), c.as_str()) {
                (true, _) => format!("({c})"),
                (false, "1") => op,
                (false, _) => format!("({c})*{op}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// JSON form: `{"form": "theta" | "dx", "coeffs": [["p/q", ...], ...]}`,
/// one list of polynomial coefficients (lowest degree first) per order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DiffOpWire {
    pub form: OpForm,
    pub coeffs: Vec<Vec<String>>,
}

impl Serialize for DiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = DiffOpWire::deserialize(d)?;
        DiffOp::from_wire(&w).map_err(serde::de::Error::custom)
    }
}
