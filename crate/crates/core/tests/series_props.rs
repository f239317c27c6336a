use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ttlab_core::schur::{hirota, schur_p, Direction, Prefix};
use ttlab_core::{VariableTable, WeightedSeries};

fn table3() -> Arc<VariableTable> {
    VariableTable::new(vec![("a", 1), ("b", 1), ("c", 2)]).unwrap()
}

fn coeff() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn terms(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u16>, BigRational)>> {
    prop::collection::vec((prop::collection::vec(0u16..4, nvars), coeff()), 0..10)
}

fn series(table: Arc<VariableTable>, order: u32) -> impl Strategy<Value = WeightedSeries> {
    let n = table.len();
    terms(n).prop_map(move |ts| WeightedSeries::from_terms(&table, order, 0, ts))
}

fn three(order: u32) -> impl Strategy<Value = (WeightedSeries, WeightedSeries, WeightedSeries)> {
    let t = table3();
    (series(t.clone(), order), series(t.clone(), order), series(t, order))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((a, b, c) in (0u32..=8).prop_flat_map(three)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exp_and_log_invert((a, _, _) in (1u32..=7).prop_flat_map(three)) {
        let t = a.table().clone();
        let zero_const = &a - &WeightedSeries::constant(&t, a.order(), a.constant_term());
        let e = zero_const.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), zero_const.clone());
        let unit = &WeightedSeries::one(&t, a.order()) + &zero_const;
        prop_assert_eq!(unit.log().unwrap().exp().unwrap(), unit);
    }

    #[test]
    fn inverse_is_two_sided((a, _, _) in (1u32..=7).prop_flat_map(three)) {
        let t = a.table().clone();
        let u = &WeightedSeries::constant(&t, a.order(), BigRational::from_integer(3.into())) + &(&a - &WeightedSeries::constant(&t, a.order(), a.constant_term()));
        let inv = u.inverse().unwrap();
        prop_assert_eq!(&u * &inv, WeightedSeries::one(&t, a.order()));
    }

    #[test]
    fn derivative_is_a_derivation((a, b, _) in (1u32..=8).prop_flat_map(three)) {
        for v in 0..3 {
            let lhs = (&a * &b).partial(v);
            let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hirota_swaps_under_reflection(j in 1usize..=4, seed in terms(3), seed2 in terms(3)) {
        let t = VariableTable::times(3);
        let f = &WeightedSeries::one(&t, 7) + &WeightedSeries::from_terms(&t, 7, 0, seed);
        let g = &WeightedSeries::one(&t, 7) + &WeightedSeries::from_terms(&t, 7, 0, seed2);
        // y -> -y exchanges the roles of f and g and negates every derivative
        prop_assert_eq!(hirota(j, &f, &g, Direction::T), hirota(j, &g, &f, Direction::NegT));
        if j == 1 {
            prop_assert_eq!(hirota(1, &f, &g, Direction::T), -hirota(1, &g, &f, Direction::T));
        }
    }
}

/// `Σ_k p_k(t) z^k = exp(Σ_i t_i z^i)` with `z` an extra weight-1 variable.
#[test]
fn schur_p_generating_identity() {
    for d in 1..=6u32 {
        let mut vars: Vec<(String, u32)> = (1..=d).map(|i| (format!("t{i}"), i)).collect();
        vars.push(("z".into(), 1));
        let t = VariableTable::new(vars).unwrap();
        let order = 2 * d;
        let z = WeightedSeries::named(&t, "z", order);
        let mut arg = WeightedSeries::zero(&t, order);
        for i in 1..=d {
            arg = &arg + &(&WeightedSeries::named(&t, &format!("t{i}"), order) * &z.pow(i));
        }
        let mut lhs = WeightedSeries::zero(&t, order);
        for k in 0..=d {
            lhs = &lhs + &(&schur_p(&t, k as i64, Prefix::T, order) * &z.pow(k));
        }
        let rhs = arg.exp().unwrap();
        // the two sides agree wherever the z-degree is at most d
        let keep = |s: &WeightedSeries| {
            WeightedSeries::from_terms(&t, order, 0, s.terms().filter(|(m, _)| m[d as usize] as u32 <= d).map(|(m, c)| (m.clone(), c.clone())))
        };
        assert_eq!(keep(&lhs), keep(&rhs), "d = {d}");
    }
}
