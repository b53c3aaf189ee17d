mod common;

use common::{bigs, binomial, ints, series};
use diaglab_core::catalog::banana_laurent;
use diaglab_core::expr::{expand, parse_expr, RationalExpr, Terms, TruncatedMultiSeries};
use diaglab_core::rational::{int, ratio, Rational};
use diaglab_core::series::{
    algebraic_series, binomial_power_series, constant_term_series, diagonal, dmap, hadamard, recompose, section,
    AlgebraicSpec, BivariatePoly, SeriesError, UniSeries, UniSeriesWire,
};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn diagonals() {
    let ms = expand(&parse_expr("1/(1-x0-x1)", 2).unwrap(), &[4, 4]).unwrap();
    assert_eq!(diagonal(&ms, 1).unwrap(), bigs((0..=4).map(|n| binomial(2 * n, n))));
    let one = expand(&RationalExpr::int(1), &[3, 3, 3]).unwrap();
    assert_eq!(diagonal(&one, 2).unwrap(), ints(&[1, 0, 0, 0]));
    assert!(matches!(diagonal(&ms, 0), Err(SeriesError::ArityMismatch { expected: 1, found: 2 })));
    // the window is the smallest cap
    let lopsided = expand(&parse_expr("1/(1-x0-x1)", 2).unwrap(), &[2, 5]).unwrap();
    assert_eq!(diagonal(&lopsided, 1).unwrap().trunc(), 2);
}

#[test]
fn hadamard_products() {
    let geo = UniSeries::geometric(6);
    assert_eq!(hadamard(&geo, &geo), geo);
    let h = binomial_power_series(&int(-1), &ratio(-1, 2), 6);
    let sq = hadamard(&h, &h);
    let oracle = UniSeries::new(
        (0..=6u64)
            .map(|n| {
                let c = Rational::new(binomial(2 * n, n), num_bigint::BigInt::from(4).pow(n as u32));
                &c * &c
            })
            .collect(),
    );
    assert_eq!(sq, oracle);
    assert!(hadamard(&geo, &UniSeries::zero(6)).is_zero());
    assert_eq!(hadamard(&geo, &UniSeries::geometric(3)).trunc(), 3);
}

#[test]
fn sections() {
    let geo = UniSeries::geometric(10);
    assert_eq!(section(&geo, 0, 2).unwrap(), UniSeries::geometric(5));
    let n = UniSeries::from_fn(10, |i| int(i as i64));
    assert_eq!(section(&n, 1, 2).unwrap(), ints(&[1, 3, 5, 7, 9]));
    assert_eq!(section(&n, 0, 1).unwrap(), n);
    assert_eq!(section(&n, 2, 2), Err(SeriesError::ResidueOutOfRange { r: 2, m: 2 }));
    assert_eq!(section(&n, 3, 4).unwrap().trunc(), 1);
}

#[test]
fn recomposition() {
    let geo = UniSeries::geometric(9);
    let parts = [section(&geo, 0, 2).unwrap(), section(&geo, 1, 2).unwrap()];
    assert_eq!(recompose(&parts).unwrap(), geo);
    let even = recompose(&[UniSeries::geometric(4), UniSeries::zero(4)]).unwrap();
    assert_eq!(even, ints(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0]));
    assert!(recompose(&[UniSeries::zero(3), UniSeries::zero(3)]).unwrap().is_zero());
    assert_eq!(recompose(&[]), Err(SeriesError::EmptyList));
}

#[test]
fn dmap_examples() {
    let terms: Terms = [(vec![1, 2, 3], int(1)), (vec![1, 1, 3], int(7))].into_iter().collect();
    let ms = TruncatedMultiSeries::new(vec![0; 3], vec![3, 3, 6], terms).unwrap();
    let d = dmap(&ms).unwrap();
    assert_eq!(d.coeff(&[1, 2]), Some(int(1)));
    assert_eq!(d.coeff(&[1, 1]), Some(int(0)));
    let g = expand(&parse_expr("1/((1-x0)*(1-x1))", 2).unwrap(), &[5, 5]).unwrap();
    assert_eq!(diagonal(&dmap(&g).unwrap(), 0).unwrap(), UniSeries::geometric(5));
    let one_var = expand(&parse_expr("1/(1-x0)", 1).unwrap(), &[5]).unwrap();
    assert_eq!(dmap(&one_var), Err(SeriesError::ArityTooSmall(1)));
}

#[test]
fn constant_term_series_examples() {
    let e = parse_expr("x0 + 1/x0", 1).unwrap();
    assert_eq!(constant_term_series(&e, 6).unwrap(), ints(&[1, 0, 2, 0, 6, 0, 20]));
    let b1 = parse_expr("(x1+1)*(1/x1+1)", 2).unwrap();
    assert_eq!(constant_term_series(&b1, 5).unwrap(), bigs((0..=5).map(|n| binomial(2 * n, n))));
    let c = RationalExpr::constant(ratio(2, 3));
    assert_eq!(constant_term_series(&c, 3).unwrap(), UniSeries::new(vec![int(1), ratio(2, 3), ratio(4, 9), ratio(8, 27)]));
    let bad = parse_expr("1/(1-x0)", 1).unwrap();
    assert!(matches!(
        constant_term_series(&bad, 3),
        Err(SeriesError::Expr(diaglab_core::expr::ExprError::NotLaurentPolynomial))
    ));
}

/// `cts(f) = Δ(1/(1 - x_0 ... x_m f))` for the first banana polynomials.
#[test]
fn constant_terms_are_diagonals() {
    for l in 1..=2usize {
        let g = banana_laurent(l);
        let vars: Vec<RationalExpr> = (0..=l).map(RationalExpr::var).collect();
        let kernel = RationalExpr::div(
            RationalExpr::int(1),
            RationalExpr::sub(RationalExpr::int(1), RationalExpr::mul(RationalExpr::product(vars), g.clone())),
        );
        // the kernel is not a power series expression; expand the cleared
        // form through the Laurent machinery instead
        let ms = diaglab_core::expand_laurent(&kernel, &vec![0; l + 1], &vec![6; l + 1]).unwrap();
        assert_eq!(diagonal(&ms, l).unwrap(), constant_term_series(&g, 6).unwrap(), "ℓ = {l}");
    }
}

#[test]
fn binomial_powers() {
    assert_eq!(binomial_power_series(&int(-1), &int(-1), 4), UniSeries::geometric(4));
    assert_eq!(
        binomial_power_series(&int(-1), &ratio(-1, 2), 3),
        UniSeries::new(vec![int(1), ratio(1, 2), ratio(3, 8), ratio(5, 16)])
    );
    assert_eq!(
        binomial_power_series(&int(-1), &ratio(1, 2), 3),
        UniSeries::new(vec![int(1), ratio(-1, 2), ratio(-1, 8), ratio(-1, 16)])
    );
    assert_eq!(binomial_power_series(&int(2), &int(2), 4), ints(&[1, 4, 4, 0, 0]));
}

fn root_spec(seed: i64) -> AlgebraicSpec {
    // y^2 - (1 - x)
    let p = BivariatePoly::new([((0, 2), int(1)), ((0, 0), int(-1)), ((1, 0), int(1))]);
    AlgebraicSpec::PolynomialRoot { annihilator: p, seed: vec![int(seed)] }
}

#[test]
fn algebraic_series_examples() {
    assert_eq!(
        algebraic_series(&root_spec(1), 12).unwrap(),
        binomial_power_series(&int(-1), &ratio(1, 2), 12)
    );
    // y - 1 - x y^2
    let catalan = BivariatePoly::new([((0, 1), int(1)), ((0, 0), int(-1)), ((1, 2), int(-1))]);
    let spec = AlgebraicSpec::PolynomialRoot { annihilator: catalan, seed: vec![int(1)] };
    assert_eq!(algebraic_series(&spec, 5).unwrap(), ints(&[1, 1, 2, 5, 14, 42]));
    assert_eq!(algebraic_series(&root_spec(2), 5), Err(SeriesError::SeedInconsistent { order: 0 }));
}

#[test]
fn uni_series_json() {
    let s = UniSeries::new(vec![int(1), ratio(-1, 2)]);
    let j = serde_json::to_string(&s).unwrap();
    assert_eq!(j, r#"{"trunc":1,"coeffs":["1","-1/2"]}"#);
    let w: UniSeriesWire = serde_json::from_str(&j).unwrap();
    assert_eq!(UniSeries::from_wire(&w).unwrap(), s);
    let bad: UniSeriesWire = serde_json::from_str(r#"{"trunc":3,"coeffs":["1"]}"#).unwrap();
    assert!(UniSeries::from_wire(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigen_decomposition(f in series(40), m in 1usize..=6) {
        prop_assume!(f.trunc() + 1 >= m);
        let parts: Vec<_> = (0..m).map(|r| section(&f, r, m).unwrap()).collect();
        prop_assert_eq!(recompose(&parts).unwrap(), f);
    }

    #[test]
    fn section_composition(f in series(60), m in 1usize..=5, m0 in 1usize..=5, r in 0usize..5, s in 0usize..5) {
        prop_assume!(num_integer::gcd(m, m0) == 1 && r < m && s < m0);
        let t = r + m * s;
        prop_assume!(t <= f.trunc());
        let lhs = section(&section(&f, r, m).unwrap(), s, m0).unwrap();
        prop_assert_eq!(lhs, section(&f, t, m * m0).unwrap());
    }

    #[test]
    fn hadamard_is_a_commutative_monoid(f in series(20), g in series(20), h in series(20)) {
        prop_assert_eq!(hadamard(&f, &g), hadamard(&g, &f));
        prop_assert_eq!(hadamard(&hadamard(&f, &g), &h), hadamard(&f, &hadamard(&g, &h)));
        prop_assert_eq!(hadamard(&f, &UniSeries::geometric(f.trunc())), f.clone());
    }

    #[test]
    fn dmap_then_diagonal(
        n in 0usize..3,
        cap in 1i64..5,
        raw in prop::collection::vec((prop::collection::vec(0i64..100, 4), common::rational(4, 3)), 0..25),
    ) {
        let mut caps = vec![cap; n + 1];
        caps.push(cap * (n as i64 + 1));
        let terms: Terms = raw
            .into_iter()
            .map(|(e, c)| (e.iter().take(n + 2).zip(&caps).map(|(x, k)| x % (k + 1)).collect::<Vec<_>>(), c))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let big = TruncatedMultiSeries::new(vec![0; n + 2], caps, terms).unwrap();
        let d = diagonal(&dmap(&big).unwrap(), n).unwrap();
        prop_assert_eq!(d.trunc(), cap as usize);
        for i in 0..=cap {
            let mut e = vec![i; n + 1];
            e.push((n as i64 + 1) * i);
            prop_assert_eq!(&d.coeffs()[i as usize], &big.coeff(&e).unwrap());
        }
    }

    #[test]
    fn binomial_powers_multiply(c in common::rational(3, 2), a in common::rational(4, 2), b in common::rational(4, 2)) {
        let n = 8;
        let lhs = binomial_power_series(&c, &a, n).mul(&binomial_power_series(&c, &b, n));
        prop_assert_eq!(lhs, binomial_power_series(&c, &(&a + &b), n));
        prop_assert!(binomial_power_series(&c, &Rational::zero(), n) == UniSeries::one(n));
    }
}
