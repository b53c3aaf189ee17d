mod common;

use common::{bigs, binomial, series};
use diaglab_core::catalog::{apery_series, section_example_pair, straub_rep};
use diaglab_core::expr::{expand, parse_expr};
use diaglab_core::grade::{
    grade_bounds, hadamard_to_disjoint_product, nil_of_series, recognize_rational, verify_diagonal_rep,
    verify_hadamard_rep, zero_divisor_witness, DiagonalRep, GradeError, HadamardRep, Witness,
};
use diaglab_core::hypergeom::{hg_coeffs, HypergeomParams};
use diaglab_core::rational::{int, ratio};
use diaglab_core::series::{binomial_power_series, diagonal, hadamard, section, AlgebraicSpec};
use diaglab_core::{Poly, UniSeries};
use proptest::prelude::*;

fn inv_sqrt() -> AlgebraicSpec {
    AlgebraicSpec::binomial(int(-1), ratio(-1, 2))
}

fn central(n: usize) -> UniSeries {
    bigs((0..=n as u64).map(|k| binomial(2 * k, k)))
}

fn simple_diag() -> DiagonalRep {
    DiagonalRep::new(parse_expr("1/(1-x0-x1)", 2).unwrap(), 2).unwrap()
}

#[test]
fn nil_of_worked_series() {
    assert_eq!(nil_of_series(&apery_series(30), 3, 4).unwrap().0.nil, 3);
    let f = hg_coeffs(&HypergeomParams::half_ladder(2), 30).unwrap();
    assert_eq!(nil_of_series(&f, 2, 3).unwrap().0.nil, 2);
    assert_eq!(nil_of_series(&UniSeries::geometric(20), 1, 1).unwrap().0.nil, 1);
    assert_eq!(
        nil_of_series(&apery_series(30), 2, 4),
        Err(GradeError::GuessFailed { max_order: 2, max_deg: 4, window: 30 })
    );
}

#[test]
fn bounds_for_worked_series() {
    let f = hg_coeffs(&HypergeomParams::half_ladder(2), 30).unwrap();
    let w = Witness::Hadamard(HadamardRep::new(vec![inv_sqrt(), inv_sqrt()]).unwrap());
    let b = grade_bounds(&f, Some(&w), 2, 3, 30).unwrap();
    assert_eq!((b.lower, b.upper, b.window), (2, Some(2), 30));

    let b = grade_bounds(&apery_series(30), Some(&Witness::Diagonal(straub_rep())), 3, 4, 8).unwrap();
    assert_eq!((b.lower, b.upper), (3, Some(3)));

    let b = grade_bounds(&UniSeries::geometric(20), None, 1, 1, 20).unwrap();
    assert_eq!((b.lower, b.upper), (0, Some(0)));

    let b = grade_bounds(&apery_series(30), None, 3, 4, 8).unwrap();
    assert_eq!((b.lower, b.upper), (3, None));
}

#[test]
fn failing_witnesses_are_errors() {
    let w = Witness::Diagonal(simple_diag());
    assert_eq!(
        grade_bounds(&apery_series(30), Some(&w), 3, 4, 8),
        Err(GradeError::WitnessFailed { window: 8 })
    );
    let f = hg_coeffs(&HypergeomParams::half_ladder(2), 30).unwrap();
    let short = Witness::Hadamard(HadamardRep::new(vec![inv_sqrt()]).unwrap());
    assert_eq!(grade_bounds(&f, Some(&short), 2, 3, 30), Err(GradeError::WitnessFailed { window: 30 }));
}

#[test]
fn verdict_json_shape() {
    let b = grade_bounds(&apery_series(30), Some(&Witness::Diagonal(straub_rep())), 3, 4, 8).unwrap();
    let j = serde_json::to_value(&b).unwrap();
    assert_eq!(j["lower"], 3);
    assert_eq!(j["upper"], 3);
    assert_eq!(j["window"], 30);
    assert_eq!(j["lowerEvidence"]["kind"], "nil");
    assert_eq!(j["lowerEvidence"]["nil"], 3);
    assert_eq!(j["upperEvidence"]["kind"], "diagonal");
    assert_eq!(j["upperEvidence"]["claimedGrade"], 3);
    let none = grade_bounds(&apery_series(30), None, 3, 4, 8).unwrap();
    assert!(serde_json::to_value(&none).unwrap()["upper"].is_null());
}

#[test]
fn diagonal_verification() {
    assert!(verify_diagonal_rep(&straub_rep(), &apery_series(8), 8).unwrap());
    assert!(verify_diagonal_rep(&simple_diag(), &central(20), 20).unwrap());
    assert!(!verify_diagonal_rep(&simple_diag(), &UniSeries::geometric(20), 20).unwrap());
    assert_eq!(
        verify_diagonal_rep(&simple_diag(), &central(5), 8),
        Err(GradeError::WindowTooSmall { needed: 8, have: 5 })
    );
    assert!(DiagonalRep::new(parse_expr("x3", 4).unwrap(), 2).is_err());
}

#[test]
fn hadamard_verification() {
    let f = hg_coeffs(&HypergeomParams::half_ladder(2), 20).unwrap();
    let two = HadamardRep::new(vec![inv_sqrt(), inv_sqrt()]).unwrap();
    assert!(verify_hadamard_rep(&two, &f, 20).unwrap());
    for n in 1..=4 {
        let f = hg_coeffs(&HypergeomParams::half_ladder(n), 20).unwrap();
        assert!(verify_hadamard_rep(&HadamardRep::new(vec![inv_sqrt(); n]).unwrap(), &f, 20).unwrap());
    }
    let wrong = HadamardRep::new(vec![inv_sqrt(), AlgebraicSpec::binomial(int(-1), ratio(1, 2))]).unwrap();
    assert!(!verify_hadamard_rep(&wrong, &f, 20).unwrap());
    assert!(HadamardRep::new(vec![]).is_err());
}

#[test]
fn disjoint_products() {
    let geo = AlgebraicSpec::binomial(int(-1), int(-1));
    let ms = hadamard_to_disjoint_product(&HadamardRep::new(vec![geo.clone(), geo]).unwrap(), 6).unwrap();
    assert_eq!(ms, expand(&parse_expr("1/((1-x0)*(1-x1))", 2).unwrap(), &[6, 6]).unwrap());
    let rep = HadamardRep::new(vec![inv_sqrt(), AlgebraicSpec::binomial(int(-4), ratio(-1, 2))]).unwrap();
    let ms = hadamard_to_disjoint_product(&rep, 8).unwrap();
    let direct = hadamard(&binomial_power_series(&int(-1), &ratio(-1, 2), 8), &central(8));
    assert_eq!(diagonal(&ms, 1).unwrap(), direct);
}

#[test]
fn zero_divisor_examples() {
    let even = UniSeries::from_fn(30, |i| if i % 2 == 0 { int(1) } else { int(0) });
    let odd = UniSeries::from_fn(30, |i| if i % 2 == 1 { int(1) } else { int(0) });
    let w = zero_divisor_witness(&even, &odd, 6, 30).unwrap();
    assert_eq!((w.m, w.f_residues, w.g_residues), (2, vec![1], vec![0]));
    assert!(zero_divisor_witness(&UniSeries::geometric(20), &UniSeries::geometric(20), 6, 20).is_none());
    let w = zero_divisor_witness(&UniSeries::zero(20), &UniSeries::geometric(20), 6, 20).unwrap();
    assert_eq!((w.m, w.f_residues, w.g_residues), (1, vec![0], vec![]));
    // product is zero but the supports interleave with period 3 and 2
    let f = UniSeries::from_fn(30, |i| if i % 6 == 0 { int(1) } else { int(0) });
    let g = UniSeries::from_fn(30, |i| if i % 6 == 3 { int(1) } else { int(0) });
    let w = zero_divisor_witness(&f, &g, 6, 30).unwrap();
    assert_eq!(w.m, 2);
}

#[test]
fn worked_section_example() {
    let (f, g) = section_example_pair(30);
    assert_eq!(hadamard(&f, &g), binomial_power_series(&int(-1), &ratio(1, 2), 30));
}

#[test]
fn rational_recognition() {
    let (p, q) = recognize_rational(&UniSeries::from_fn(30, |i| int(i as i64 + 1)), 3).unwrap();
    assert_eq!((p, q), (Poly::one(), Poly::from_ints(&[1, -2, 1])));
    assert!(recognize_rational(&central(30), 5).is_none());
}

/// Diagonals of verified representations commute with sections.
#[test]
fn sections_of_verified_diagonals() {
    let rep = straub_rep();
    let f = apery_series(12);
    assert!(verify_diagonal_rep(&rep, &f, 12).unwrap());
    let ms = expand(rep.expr(), &[12; 4]).unwrap();
    for m in 1..=4usize {
        for r in 0..m {
            let filtered = UniSeries::new(
                (0..)
                    .map(|k| r + k * m)
                    .take_while(|&i| i <= 12)
                    .map(|i| ms.coeff(&[i as i64; 4]).unwrap())
                    .collect(),
            );
            assert_eq!(section(&f, r, m).unwrap(), filtered);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// A returned witness certifies `f * g = 0` exactly.
    #[test]
    fn witnesses_imply_zero_products(f in series(30), g in series(30), mask_f in 0u8..64, mask_g in 0u8..64, m in 1usize..=6) {
        let kill = |s: &UniSeries, mask: u8| UniSeries::from_fn(s.trunc(), |i| {
            if mask >> (i % m) & 1 == 1 { s.coeffs()[i].clone() } else { int(0) }
        });
        let (f, g) = (kill(&f, mask_f), kill(&g, !mask_f & mask_g));
        if let Some(w) = zero_divisor_witness(&f, &g, 6, 30) {
            prop_assert!(hadamard(&f, &g).is_zero());
            prop_assert!((0..w.m).all(|r| w.f_residues.contains(&r) || w.g_residues.contains(&r)));
            let n = f.trunc().min(g.trunc());
            for &r in &w.f_residues {
                prop_assert!(section(&f.truncate(n), r, w.m).map(|s| s.is_zero()).unwrap_or(true));
            }
        }
    }
}
