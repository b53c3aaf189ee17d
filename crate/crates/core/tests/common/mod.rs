#![allow(dead_code)]

use diaglab_core::rational::Rational;
use diaglab_core::{RationalExpr, UniSeries};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn rational(max_den: i64, bound: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(move |q| (-bound * q..=bound * q).prop_map(move |p| Rational::new(p.into(), q.into())))
}

pub fn series(max_len: usize) -> impl Strategy<Value = UniSeries> {
    prop::collection::vec(rational(5, 4), 1..=max_len).prop_map(UniSeries::new)
}

/// Polynomial expressions in `arity` variables.
pub fn poly_expr(arity: usize) -> impl Strategy<Value = RationalExpr> {
    let leaf = prop_oneof![
        rational(4, 3).prop_map(RationalExpr::constant),
        (0..arity).prop_map(RationalExpr::var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RationalExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RationalExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RationalExpr::mul(a, b)),
            (inner.clone(), 0..3i64).prop_map(|(a, k)| RationalExpr::pow(a, k)),
            inner.prop_map(RationalExpr::neg),
        ]
    })
}

/// Expressions whose divisions all have a unit denominator `c + x_i q`.
pub fn expandable_expr(arity: usize) -> impl Strategy<Value = RationalExpr> {
    let unit = (rational(4, 3).prop_filter("nonzero", |c| *c != Rational::from_integer(0.into())), 0..arity, poly_expr(arity))
        .prop_map(|(c, i, q)| RationalExpr::add(RationalExpr::constant(c), RationalExpr::mul(RationalExpr::var(i), q)));
    (poly_expr(arity), prop::option::of(unit)).prop_map(|(p, u)| match u {
        Some(u) => RationalExpr::div(p, u),
        None => p,
    })
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

pub fn ints(v: &[i64]) -> UniSeries {
    UniSeries::from_ints(v)
}

pub fn bigs(v: impl IntoIterator<Item = BigInt>) -> UniSeries {
    UniSeries::new(v.into_iter().map(Rational::from_integer).collect())
}
