//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{denominator_lcm, numerator_gcd, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// `(y + a)` as a polynomial in `y`.
    pub fn linear(a: Rational) -> Self {
        Poly::new(vec![a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Division by `x^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients of `p(s + y)` as a polynomial in `y`, i.e. the Taylor
    /// coefficients `p^(t)(s) / t!`.
    pub fn taylor_at(&self, s: &Rational) -> Poly {
        // Horner in the ring Q[y]: p(s + y) = (..((a_d)(s+y) + a_{d-1})(s+y) ..)
        let shift = Poly::linear(s.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &shift) + &Poly::constant(c.clone()))
    }

    /// Exact division by the monic linear factor `(y - r)`; returns the
    /// quotient and remainder.
    pub fn div_linear(&self, r: &Rational) -> (Poly, Rational) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Poly::zero(), Rational::zero());
        }
        let mut q = vec![Rational::zero(); n - 1];
        let mut acc = Rational::zero();
        for i in (0..n).rev() {
            acc = &acc * r + &self.coeffs[i];
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Poly::new(q), acc)
    }

    /// Scales to integer coefficients with gcd one and positive leading
    /// coefficient. Returns the integer coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = denominator_lcm(&self.coeffs);
        let scaled: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|c| c * Rational::from_integer(l.clone()))
            .collect();
        let g = numerator_gcd(&scaled);
        let sign = if scaled.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        scaled
            .iter()
            .map(|c| c.numer() / &g * &sign)
            .collect()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn trims_and_evaluates() {
        let p = Poly::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        let q = Poly::from_ints(&[1, -34, 1]);
        assert_eq!(q.eval(&int(2)), int(1 - 68 + 4));
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = Poly::from_ints(&[3, 0, -2, 5]);
        let s = ratio(1, 3);
        let t = p.taylor_at(&s);
        let mut d = p.clone();
        let mut fact = int(1);
        for k in 0..4 {
            if k > 0 {
                fact *= int(k as i64);
            }
            assert_eq!(t.coeff(k), d.eval(&s) / &fact);
            d = d.derivative();
        }
    }

    #[test]
    fn linear_division_has_zero_remainder_at_roots() {
        // (y - 2)(y + 1/2) = y^2 - 3/2 y - 1
        let p = Poly::new(vec![int(-1), ratio(-3, 2), int(1)]);
        let (q, r) = p.div_linear(&int(2));
        assert_eq!(r, int(0));
        assert_eq!(q, Poly::linear(ratio(1, 2)));
    }

    #[test]
    fn primitive_integer_normalises_sign_and_content() {
        let p = Poly::new(vec![ratio(-1, 2), int(0), ratio(-3, 4)]);
        let ints: Vec<i64> = p
            .primitive_integer()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect();
        assert_eq!(ints, vec![2, 0, 3]);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Poly::from_ints(&[-5, 1]).to_string(), "x - 5");
        assert_eq!(Poly::from_ints(&[0, 0, 1, -34, 1]).to_string(), "x^4 - 34*x^3 + x^2");
    }
}
