use num_traits::Zero;

use super::linalg::nullspace;
use super::{DiffOp, OpForm};
use crate::par;
use crate::poly::Poly;
use crate::rational::{int, Rational};
use crate::series::UniSeries;

/// Extra coefficients beyond `(r + 1)(d + 1)` that a guess must annihilate.
pub const GUARD: usize = 10;

/// Smallest d/dx-form operator (order first, then degree) of order `<= r`
/// and coefficient degree `<= d` that annihilates `f` on its whole window.
///
/// Needs `f.trunc() >= (r + 1)(d + 1) + GUARD`; returns `None` otherwise or
/// when no such operator exists. The result is scaled to coprime integer
/// coefficients with the lowest nonzero coefficient of the leading
/// polynomial positive.
pub fn guess_operator(f: &UniSeries, max_order: usize, max_deg: usize) -> Option<DiffOp> {
    let n = f.trunc();
    if n < (max_order + 1) * (max_deg + 1) + GUARD {
        return None;
    }
    // der[i][m] = [x^m] f^(i) = (m + 1) ... (m + i) f_{m+i}
    let mut der: Vec<Vec<Rational>> = vec![f.coeffs().to_vec()];
    for i in 1..=max_order {
        let prev = &der[i - 1];
        let next: Vec<Rational> = (0..prev.len().saturating_sub(1))
            .map(|m| &prev[m + 1] * int(m as i64 + 1))
            .collect();
        der.push(next);
    }
    for order in 0..=max_order {
        for deg in 0..=max_deg {
            let ncols = (order + 1) * (deg + 1);
            let rows: Vec<Vec<Rational>> = par::map_range(n - order + 1, |k| {
                let mut row = vec![Rational::zero(); ncols];
                for i in 0..=order {
                    for s in 0..=deg.min(k) {
                        row[i * (deg + 1) + s] = der[i][k - s].clone();
                    }
                }
                row
            });
            if let Some(v) = nullspace(rows, ncols).into_iter().next() {
                let coeffs = (0..=order)
                    .map(|i| Poly::new(v[i * (deg + 1)..(i + 1) * (deg + 1)].to_vec()))
                    .collect();
                let op = DiffOp::new(OpForm::Dx, coeffs).ok()?;
                return Some(op.normalized());
            }
        }
    }
    None
}
