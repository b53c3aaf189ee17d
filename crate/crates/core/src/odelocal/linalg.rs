//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::par;
use crate::rational::Rational;

/// Basis of the right nullspace of `rows` (each of length `ncols`), from the
/// reduced row echelon form: one vector per free column, ascending, with a
/// 1 in that column.
pub fn nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        let pivot_row: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        let others: Vec<Vec<Rational>> = std::mem::take(&mut rows);
        rows = par::map_range(others.len(), |i| {
            if i == r {
                return pivot_row.clone();
            }
            let row = &others[i];
            let f = &row[col];
            if f.is_zero() {
                return row.clone();
            }
            row.iter().zip(&pivot_row).map(|(a, b)| a - f * b).collect()
        });
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
fn rank(rows: Vec<Vec<Rational>>, ncols: usize) -> usize {
    ncols - nullspace(rows, ncols).len()
}
