use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{indicial, DiffOp, OdeError};
use crate::par;
use crate::poly::Poly;
use crate::rational::{frac, int, Rational};

/// `x^ρ Σ_{j, k} c_{j,k} x^j log(x)^k`, known for `j <= trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSolution {
    exponent: Rational,
    trunc: usize,
    table: BTreeMap<(usize, usize), Rational>,
}

impl FormalSolution {
    /// Zero entries are dropped.
    pub fn new(exponent: Rational, trunc: usize, table: BTreeMap<(usize, usize), Rational>) -> Self {
        let table = table.into_iter().filter(|(k, c)| k.0 <= trunc && !c.is_zero()).collect();
        FormalSolution { exponent, trunc, table }
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn table(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Largest power of `log x` with a nonzero coefficient (0 when none).
    pub fn log_degree(&self) -> usize {
        self.table.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// The log-polynomial multiplying `x^(ρ + j)`.
    pub fn level(&self, j: usize) -> Poly {
        let deg = self.table.range((j, 0)..=(j, usize::MAX)).map(|(&(_, k), _)| k).max();
        match deg {
            None => Poly::zero(),
            Some(d) => Poly::new((0..=d).map(|k| self.table.get(&(j, k)).cloned().unwrap_or_else(Rational::zero)).collect()),
        }
    }

    /// `L` applied to this solution, by `θ(x^s log^k) = s x^s log^k + k x^s log^(k-1)`.
    /// Known through the same window.
    pub fn residual(&self, op: &DiffOp) -> FormalSolution {
        let t = op.to_theta_form();
        let slices = t.theta_slices();
        let mut table = BTreeMap::new();
        for j in 0..=self.trunc {
            let g = self.level(j);
            if g.is_zero() {
                continue;
            }
            for (k, pk) in slices.iter().enumerate() {
                if j + k > self.trunc || pk.is_zero() {
                    continue;
                }
                let s = &self.exponent + int((j) as i64);
                let img = apply_in_log(&pk.taylor_at(&s), &g);
                for (l, c) in img.coeffs().iter().enumerate() {
                    *table.entry((j + k, l)).or_insert_with(Rational::zero) += c;
                }
            }
        }
        FormalSolution::new(self.exponent.clone(), self.trunc, table)
    }
}

impl Serialize for FormalSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Wire {
            exponent: String,
            trunc: usize,
            log_degree: usize,
            terms: Vec<(usize, usize, String)>,
        }
        Wire {
            exponent: self.exponent.to_string(),
            trunc: self.trunc,
            log_degree: self.log_degree(),
            terms: self.table.iter().map(|(&(j, k), c)| (j, k, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

/// Nilpotence index with the exponents and basis it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilReport {
    pub nil: usize,
    #[serde(serialize_with = "exponents_as_strings")]
    pub exponents: Vec<(Rational, usize)>,
    pub window: usize,
    pub basis: Vec<FormalSolution>,
}

fn exponents_as_strings<S: serde::Serializer>(r: &[(Rational, usize)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<(String, usize)> = r.iter().map(|(q, m)| (q.to_string(), *m)).collect();
    v.serialize(s)
}

/// `Σ_i q_i ∂^i g` for `g` a polynomial in `log x` and `∂ = d/d(log x)`.
fn apply_in_log(q: &Poly, g: &Poly) -> Poly {
    let mut out = Poly::zero();
    let mut dg = g.clone();
    for c in q.coeffs() {
        if dg.is_zero() {
            break;
        }
        out = &out + &dg.scale(c);
        dg = dg.derivative();
    }
    out
}

/// Antiderivative in `log x` with zero constant.
fn integrate(g: &Poly) -> Poly {
    let mut c = vec![Rational::zero()];
    c.extend(g.coeffs().iter().enumerate().map(|(i, a)| a / int(i as i64 + 1)));
    Poly::new(c)
}

/// Solves `∂^μ U(∂) h = r` with `U(0) != 0`, choosing zero for the
/// free polynomial of degree `< μ`.
fn solve_level(p0_at: &Poly, r: &Poly) -> Poly {
    if r.is_zero() {
        return Poly::zero();
    }
    let mu = p0_at.valuation().expect("P_0 is nonzero");
    let u = p0_at.shift_down(mu);
    let deg = r.degree().unwrap_or(0);
    // V = 1/U as a power series in ∂, needed only through deg r.
    let u0_inv = u.coeff(0).recip();
    let mut v = vec![u0_inv.clone()];
    for i in 1..=deg {
        let mut s = Rational::zero();
        for l in 1..=i {
            s += u.coeff(l) * &v[i - l];
        }
        v.push(-s * &u0_inv);
    }
    let mut h = apply_in_log(&Poly::new(v), r);
    for _ in 0..mu {
        h = integrate(&h);
    }
    h
}

struct Coset {
    base: Rational,
    /// `(level, multiplicity)` of the roots `base + level`.
    roots: Vec<(usize, usize)>,
}

fn cosets(roots: &[(Rational, usize)]) -> Vec<Coset> {
    let mut groups: BTreeMap<Rational, Vec<(Rational, usize)>> = BTreeMap::new();
    for (r, m) in roots {
        groups.entry(frac(r)).or_default().push((r.clone(), *m));
    }
    let mut out: Vec<Coset> = groups
        .into_values()
        .map(|mut g| {
            g.sort();
            let base = g[0].0.clone();
            let roots = g
                .iter()
                .map(|(r, m)| {
                    let lvl = (r - &base).to_integer();
                    (usize::try_from(lvl).expect("ascending within coset"), *m)
                })
                .collect();
            Coset { base, roots }
        })
        .collect();
    out.sort_by(|a, b| a.base.cmp(&b.base));
    out
}

struct Job<'a> {
    coset: &'a Coset,
    level: usize,
    log_power: usize,
}

/// A basis of formal solutions at 0, truncated at `N` steps past each
/// solution's own exponent.
///
/// Roots are grouped into classes mod ℤ. Within a class with smallest root
/// `ρ0` the solution is `x^ρ0 Σ_j x^j g_j(log x)` and the recursion reads
/// `P_0(ρ0 + j + ∂) g_j = -Σ_{k>=1} P_k(ρ0 + j - k + ∂) g_{j-k}`. Each root
/// `ρ0 + j_p` of multiplicity `μ` contributes `μ` solutions starting with
/// `g_{j_p} = log^t` (`t < μ`); at later roots the free part is set to zero,
/// and the forced logarithms appear through the `μ`-fold integration.
pub fn frobenius_basis(op: &DiffOp, order: usize) -> Result<Vec<FormalSolution>, OdeError> {
    let ind = indicial(op)?;
    let slices = op.theta_normal_form().theta_slices();
    let classes = cosets(&ind.roots);
    let jobs: Vec<Job> = classes
        .iter()
        .flat_map(|c| {
            c.roots.iter().flat_map(move |&(level, mu)| {
                (0..mu).map(move |t| Job { coset: c, level, log_power: t })
            })
        })
        .collect();
    Ok(par::map_slice(&jobs, |job| solve_job(&slices, job, order)))
}

fn solve_job(slices: &[Poly], job: &Job, order: usize) -> FormalSolution {
    let base = &job.coset.base;
    let start = job.level;
    let mut levels: Vec<Poly> = Vec::with_capacity(order + 1);
    levels.push(Poly::monomial(Rational::one(), job.log_power));
    for rel in 1..=order {
        let j = start + rel;
        let mut r = Poly::zero();
        for (k, pk) in slices.iter().enumerate().skip(1) {
            if k > rel || pk.is_zero() {
                continue;
            }
            let prev = &levels[rel - k];
            if prev.is_zero() {
                continue;
            }
            let s = base + int((j - k) as i64);
            r = &r - &apply_in_log(&pk.taylor_at(&s), prev);
        }
        let p0_at = slices[0].taylor_at(&(base + int(j as i64)));
        levels.push(solve_level(&p0_at, &r));
    }
    let mut table = BTreeMap::new();
    for (rel, g) in levels.iter().enumerate() {
        for (k, c) in g.coeffs().iter().enumerate() {
            table.insert((rel, k), c.clone());
        }
    }
    FormalSolution::new(base + int(start as i64), order, table)
}

/// Nilpotence index from a basis computed far enough to pass every
/// integer gap between exponents.
pub fn nil_index(op: &DiffOp) -> Result<NilReport, OdeError> {
    nil_index_with_window(op, 0)
}

/// As [`nil_index`], with the basis truncated at `max(N, largest gap)`.
pub fn nil_index_with_window(op: &DiffOp, order: usize) -> Result<NilReport, OdeError> {
    let ind = indicial(op)?;
    let gap = cosets(&ind.roots)
        .iter()
        .flat_map(|c| c.roots.iter().map(|&(l, _)| l))
        .max()
        .unwrap_or(0);
    let window = order.max(gap);
    let basis = frobenius_basis(op, window)?;
    let nil = 1 + basis.iter().map(FormalSolution::log_degree).max().unwrap_or(0);
    Ok(NilReport { nil, exponents: ind.roots, window, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odelocal::OpForm;
    use crate::rational::ratio;

    fn half_half() -> DiffOp {
        // θ² - x(θ + 1/2)²
        DiffOp::new(
            OpForm::Theta,
            vec![Poly::new(vec![int(0), ratio(-1, 4)]), Poly::from_ints(&[0, -1]), Poly::from_ints(&[1, -1])],
        )
        .unwrap()
    }

    #[test]
    fn log_solution_for_double_root() {
        let basis = frobenius_basis(&half_half(), 8).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis.iter().map(FormalSolution::log_degree).collect::<Vec<_>>(), vec![0, 1]);
        for s in &basis {
            assert!(s.residual(&half_half()).is_zero());
        }
        // the log-free solution is 2F1(1/2, 1/2; 1)
        assert_eq!(basis[0].table().get(&(2, 0)), Some(&ratio(9, 64)));
        assert_eq!(nil_index(&half_half()).unwrap().nil, 2);
    }

    #[test]
    fn noninteger_gap_gives_no_logs() {
        // θ(θ - 1/2)
        let op = DiffOp::new(OpForm::Theta, vec![Poly::zero(), Poly::constant(ratio(-1, 2)), Poly::one()]).unwrap();
        let basis = frobenius_basis(&op, 3).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis.iter().all(|s| s.log_degree() == 0));
        let exps: Vec<_> = basis.iter().map(|s| s.exponent().clone()).collect();
        assert_eq!(exps, vec![int(0), ratio(1, 2)]);
        assert_eq!(nil_index(&op).unwrap().nil, 1);
    }

    #[test]
    fn resonant_gap_forces_a_log() {
        // θ(θ - 1) - x: exponents 0 and 1, the level-1 equation for the
        // root 0 is obstructed, so a log appears.
        let op = DiffOp::new(OpForm::Theta, vec![Poly::from_ints(&[0, -1]), Poly::constant(int(-1)), Poly::one()]).unwrap();
        let rep = nil_index(&op).unwrap();
        assert_eq!(rep.nil, 2);
        for s in &rep.basis {
            assert!(s.residual(&op).is_zero());
        }
    }

    #[test]
    fn first_order_operator_has_nil_one() {
        let op = DiffOp::new(OpForm::Theta, vec![Poly::constant(ratio(3, 2)), Poly::one()]).unwrap();
        assert_eq!(nil_index(&op).unwrap().nil, 1);
    }
}
