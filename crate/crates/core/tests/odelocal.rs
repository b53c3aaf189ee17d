mod common;

use common::rational;
use diaglab_core::catalog::{apery_operator, apery_series, entries};
use diaglab_core::hypergeom::{hg_operator, HypergeomParams};
use diaglab_core::odelocal::{
    frobenius_basis, guess_operator, indicial, nil_index, nil_index_with_window, DiffOp, OdeError, OpForm, GUARD,
};
use diaglab_core::poly::Poly;
use diaglab_core::rational::{int, ratio, Rational};
use diaglab_core::UniSeries;
use proptest::prelude::*;

fn theta_minus_x_theta_half_sq() -> DiffOp {
    hg_operator(&HypergeomParams::half_ladder(2))
}

#[test]
fn form_conversions() {
    let t = DiffOp::theta().to_dx_form();
    assert_eq!(t, DiffOp::new(OpForm::Dx, vec![Poly::zero(), Poly::x()]).unwrap());
    let (th, shift) = apery_operator().to_theta_form_with_shift();
    assert_eq!(th.x_degree(), 2);
    assert_eq!(shift, 1);
    // θ^3 - x(34θ^3 + 51θ^2 + 27θ + 5) + x^2(θ + 1)^3
    let expected = DiffOp::new(
        OpForm::Theta,
        vec![
            Poly::from_ints(&[0, -5, 1]),
            Poly::from_ints(&[0, -27, 3]),
            Poly::from_ints(&[0, -51, 3]),
            Poly::from_ints(&[1, -34, 1]),
        ],
    )
    .unwrap();
    assert!(th.equal_up_to_content(&expected), "{}", th.pretty());
    let f = apery_series(20);
    assert!(th.apply(&f).unwrap().is_zero());
    let op = theta_minus_x_theta_half_sq();
    assert!(op.to_dx_form().to_theta_form().equal_up_to_content(&op));
}

#[test]
fn application() {
    let geo = UniSeries::geometric(6);
    assert_eq!(DiffOp::theta().apply(&geo).unwrap(), UniSeries::from_fn(6, |i| int(i as i64)));
    assert!(apery_operator().apply(&apery_series(30)).unwrap().is_zero());
    assert!(DiffOp::dx().apply(&UniSeries::one(4)).unwrap().is_zero());
    assert_eq!(
        apery_operator().apply(&UniSeries::one(2)),
        Err(OdeError::WindowTooSmall { needed: 3, have: 2 })
    );
}

#[test]
fn multiplication() {
    let x = DiffOp::multiplication(OpForm::Theta, Poly::x()).unwrap();
    let tx = DiffOp::theta().multiply(&x);
    let xt = x.multiply(&DiffOp::theta());
    let commutator = DiffOp::new(OpForm::Theta, tx.coeffs().iter().zip(xt.coeffs()).map(|(a, b)| a - b).collect());
    assert_eq!(commutator.unwrap(), x);
    let one = DiffOp::multiplication(OpForm::Theta, Poly::one()).unwrap();
    let op = theta_minus_x_theta_half_sq();
    assert_eq!(op.multiply(&one), op);
    let f = UniSeries::new((0..12).map(|i| ratio(i * i - 3, i + 1)).collect());
    let a = apery_operator();
    let lhs = a.multiply(&op).apply(&f).unwrap();
    let rhs = a.apply(&op.apply(&f).unwrap()).unwrap();
    assert!(lhs.agrees_with(&rhs));
}

#[test]
fn indicial_data() {
    let a = indicial(&apery_operator()).unwrap();
    assert_eq!(a.polynomial, Poly::from_ints(&[0, 0, 0, 1]));
    assert_eq!(a.roots, vec![(int(0), 3)]);
    assert_eq!(indicial(&theta_minus_x_theta_half_sq()).unwrap().roots, vec![(int(0), 2)]);
    let euler = DiffOp::theta_poly(&Poly::linear(ratio(-1, 2))).unwrap();
    assert_eq!(indicial(&euler).unwrap().roots, vec![(ratio(1, 2), 1)]);
    let irregular = DiffOp::from_int_coeffs(OpForm::Dx, &[&[1], &[], &[0, 0, 0, 1]]).unwrap();
    assert!(!irregular.is_regular_singular_at_zero());
    assert_eq!(indicial(&irregular), Err(OdeError::IrregularSingular));
    let irrational = DiffOp::theta_poly(&Poly::from_ints(&[-2, 0, 1])).unwrap();
    assert!(matches!(indicial(&irrational), Err(OdeError::IrrationalExponent(_))));
}

#[test]
fn frobenius_bases() {
    let basis = frobenius_basis(&theta_minus_x_theta_half_sq(), 10).unwrap();
    let mut logs: Vec<_> = basis.iter().map(|b| b.log_degree()).collect();
    logs.sort();
    assert_eq!(logs, vec![0, 1]);
    let basis = frobenius_basis(&apery_operator(), 10).unwrap();
    let mut logs: Vec<_> = basis.iter().map(|b| b.log_degree()).collect();
    logs.sort();
    assert_eq!(logs, vec![0, 1, 2]);
    let op = DiffOp::theta_poly(&(&Poly::from_ints(&[0, 1]) * &Poly::linear(ratio(-1, 2)))).unwrap();
    let basis = frobenius_basis(&op, 5).unwrap();
    let mut exps: Vec<_> = basis.iter().map(|b| (b.exponent().clone(), b.log_degree())).collect();
    exps.sort();
    assert_eq!(exps, vec![(int(0), 0), (ratio(1, 2), 0)]);
}

#[test]
fn nilpotence() {
    assert_eq!(nil_index(&apery_operator()).unwrap().nil, 3);
    for n in 2..=4 {
        assert_eq!(nil_index(&hg_operator(&HypergeomParams::half_ladder(n))).unwrap().nil, n);
    }
    let first = DiffOp::theta_poly(&Poly::linear(ratio(3, 7))).unwrap();
    assert_eq!(nil_index(&first).unwrap().nil, 1);
}

#[test]
fn exponent_gap_forces_logs() {
    // θ(θ - 2) - x: the integer gap 2 produces a logarithm
    let op = DiffOp::new(OpForm::Theta, vec![Poly::from_ints(&[0, -1]), Poly::constant(int(-2)), Poly::one()]).unwrap();
    let r = nil_index(&op).unwrap();
    assert_eq!(r.nil, 2);
    assert!(r.window >= 2);
    // θ(θ - 2): no coupling, no logarithm
    let split = DiffOp::theta_poly(&Poly::from_ints(&[0, -2, 1])).unwrap();
    assert_eq!(nil_index_with_window(&split, 6).unwrap().nil, 1);
}

#[test]
fn guessing() {
    let g = guess_operator(&apery_series(30), 3, 4).unwrap();
    assert!(g.equal_up_to_content(&apery_operator()));
    assert_eq!(
        guess_operator(&UniSeries::geometric(20), 1, 1).unwrap(),
        DiffOp::from_int_coeffs(OpForm::Dx, &[&[-1], &[1, -1]]).unwrap()
    );
    assert!(guess_operator(&apery_series(5), 3, 4).is_none());
    assert!(guess_operator(&apery_series(29), 3, 4).is_none());
    assert_eq!(GUARD, 10);
}

/// Guessed operators keep annihilating well past the guessing window.
#[test]
fn guessed_operators_survive_fresh_terms() {
    for e in entries() {
        let g = guess_operator(&e.series(e.window), e.max_order, e.max_deg).unwrap_or_else(|| panic!("{}", e.name));
        let fresh = e.series(e.window + 20);
        assert!(g.apply(&fresh).unwrap().is_zero(), "{}", e.name);
    }
}

#[test]
fn wire_format() {
    let op = apery_operator();
    let j = serde_json::to_value(&op).unwrap();
    assert_eq!(j["form"], "dx");
    assert_eq!(j["coeffs"][0], serde_json::json!(["-5", "1"]));
    let back: DiffOp = serde_json::from_value(j).unwrap();
    assert_eq!(back, op);
    assert_eq!(op.pretty(), "(x^4 - 34*x^3 + x^2)*D^3 + (6*x^3 - 153*x^2 + 3*x)*D^2 + (7*x^2 - 112*x + 1)*D + (x - 5)");
}

fn small_theta_op() -> impl Strategy<Value = DiffOp> {
    // Σ_k x^k P_k(θ) with monic P_0 whose roots are small rationals
    (
        prop::collection::vec(rational(3, 2), 1..=3),
        prop::collection::vec(prop::collection::vec(rational(3, 2), 1..=3), 0..=2),
    )
        .prop_map(|(roots, higher)| {
            let r = roots.len();
            let p0 = roots.iter().fold(Poly::one(), |acc, q| &acc * &Poly::linear(-q));
            let mut coeffs: Vec<Poly> = p0.coeffs().iter().map(|c| Poly::constant(c.clone())).collect();
            for (k, pk) in higher.iter().enumerate() {
                for (j, c) in pk.iter().take(r).enumerate() {
                    coeffs[j] = &coeffs[j] + &Poly::monomial(c.clone(), k + 1);
                }
            }
            DiffOp::new(OpForm::Theta, coeffs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formal_solutions_are_solutions(op in small_theta_op()) {
        let basis = frobenius_basis(&op, 8).unwrap();
        prop_assert_eq!(basis.len(), op.order());
        for s in &basis {
            prop_assert!(!s.is_zero());
            prop_assert!(s.residual(&op).is_zero());
        }
    }

    #[test]
    fn exponent_multiplicities_match_cosets(op in small_theta_op()) {
        let ind = indicial(&op).unwrap();
        let basis = frobenius_basis(&op, 6).unwrap();
        for (rho, _) in &ind.roots {
            let in_coset = |q: &Rational| (q - rho).is_integer();
            let expected: usize = ind.roots.iter().filter(|(q, _)| in_coset(q)).map(|(_, m)| m).sum();
            let found = basis.iter().filter(|s| in_coset(s.exponent())).count();
            prop_assert_eq!(found, expected);
        }
    }

    #[test]
    fn nil_ignores_scaling(op in small_theta_op(), c in rational(5, 3)) {
        prop_assume!(c != int(0));
        let scaled = DiffOp::new(op.form(), op.coeffs().iter().map(|p| p.scale(&c)).collect()).unwrap();
        prop_assert_eq!(nil_index(&scaled).unwrap().nil, nil_index(&op).unwrap().nil);
        prop_assert_eq!(nil_index(&op.normalized()).unwrap().nil, nil_index(&op).unwrap().nil);
    }

    #[test]
    fn dx_and_theta_forms_agree(op in small_theta_op(), f in common::series(15)) {
        prop_assume!(f.trunc() >= op.order());
        let a = op.apply(&f).unwrap();
        let b = op.to_dx_form().apply(&f).unwrap();
        let n = a.trunc().min(b.trunc());
        prop_assert_eq!(a.truncate(n), b.truncate(n));
    }
}
