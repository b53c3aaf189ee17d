use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{DiffOp, OdeError};
use crate::poly::Poly;
use crate::rational::Rational;

/// Indicial polynomial at 0 and its rational roots, ascending, with
/// multiplicities summing to the degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Indicial {
    #[serde(serialize_with = "poly_as_strings")]
    pub polynomial: Poly,
    #[serde(serialize_with = "roots_as_strings")]
    pub roots: Vec<(Rational, usize)>,
}

fn poly_as_strings<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
    v.serialize(s)
}

fn roots_as_strings<S: serde::Serializer>(r: &[(Rational, usize)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<(String, usize)> = r.iter().map(|(q, m)| (q.to_string(), *m)).collect();
    v.serialize(s)
}

/// `I(ρ) = Σ_i p_i(0) ρ^i` for the θ-form `Σ p_i(x) θ^i` with the common
/// power of `x` cleared.
pub fn indicial(op: &DiffOp) -> Result<Indicial, OdeError> {
    let t = op.theta_normal_form();
    if t.leading().coeff(0).is_zero() {
        return Err(OdeError::IrregularSingular);
    }
    let polynomial = Poly::new(t.coeffs().iter().map(|p| p.coeff(0)).collect());
    let (roots, rest) = rational_roots(&polynomial)?;
    if rest.degree().unwrap_or(0) > 0 {
        return Err(OdeError::IrrationalExponent(rest.display_in("ρ")));
    }
    Ok(Indicial { polynomial, roots })
}

fn divisors(n: &BigInt) -> Result<Vec<u64>, OdeError> {
    let n = n
        .abs()
        .to_u64()
        .ok_or_else(|| OdeError::Invalid("coefficient too large for rational root search".into()))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Rational roots with multiplicity, ascending, and the cofactor that has
/// no rational roots.
pub fn rational_roots(p: &Poly) -> Result<(Vec<(Rational, usize)>, Poly), OdeError> {
    let mut roots = Vec::new();
    if p.is_zero() {
        return Ok((roots, Poly::zero()));
    }
    let v = p.valuation().expect("nonzero");
    let mut rest = p.shift_down(v);
    if v > 0 {
        roots.push((Rational::zero(), v));
    }
    if rest.degree().unwrap_or(0) > 0 {
        let ints = rest.primitive_integer();
        let a0 = ints.first().expect("nonzero").clone();
        let ad = ints.last().expect("nonzero").clone();
        let mut candidates = Vec::new();
        for q in divisors(&ad)? {
            for pnum in divisors(&a0)? {
                for sign in [1i64, -1] {
                    candidates.push(Rational::new(BigInt::from(pnum) * sign, BigInt::from(q)));
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let mut mult = 0;
            loop {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                let (q, r) = rest.div_linear(&c);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((c, mult));
            }
        }
    }
    roots.sort();
    Ok((roots, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odelocal::OpForm;
    use crate::rational::{int, ratio};

    #[test]
    fn euler_operator_root() {
        // θ - 1/2
        let op = DiffOp::new(OpForm::Theta, vec![Poly::constant(ratio(-1, 2)), Poly::one()]).unwrap();
        let ind = indicial(&op).unwrap();
        assert_eq!(ind.roots, vec![(ratio(1, 2), 1)]);
    }

    #[test]
    fn roots_with_multiplicity_and_leftover() {
        // (ρ - 2)^2 (3ρ + 1) (ρ^2 + 1)
        let p = Poly::from_ints(&[-2, 1]).pow(2)
            * Poly::from_ints(&[1, 3])
            * Poly::from_ints(&[1, 0, 1]);
        let (roots, rest) = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(ratio(-1, 3), 1), (int(2), 2)]);
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn irrational_and_irregular_cases() {
        // θ^2 - 2
        let op = DiffOp::new(OpForm::Theta, vec![Poly::constant(int(-2)), Poly::zero(), Poly::one()]).unwrap();
        assert!(matches!(indicial(&op), Err(OdeError::IrrationalExponent(_))));
        let op = DiffOp::new(OpForm::Dx, vec![Poly::one(), Poly::zero(), Poly::monomial(int(1), 3)]).unwrap();
        assert_eq!(indicial(&op), Err(OdeError::IrregularSingular));
    }
}
