use proptest::prelude::*;

use ttlab_core::scalar::int;
use ttlab_core::lattice::{circle_system, factor_biorth};
use ttlab_core::tau::{Deformation, WeightSpec};
use ttlab_core::{VariableTable, WeightedSeries};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// `Σ_{a,b} p1[n][a] μ_{ab} p2[m][b] = δ_{nm} h_n`.
    #[test]
    fn polynomials_are_biorthogonal(k in 0u32..=3, d in 1u32..=4) {
        let tab = VariableTable::two_times(2);
        let sys = factor_biorth(&WeightSpec::Circle { k }, &Deformation::standard(&tab, d), 4).unwrap();
        for n in 0..4 {
            for m in 0..4 {
                let mut acc = WeightedSeries::zero(&tab, d);
                for a in 0..=n {
                    for b in 0..=m {
                        acc = &acc + &(&(&sys.p1[n][a] * &sys.moments[a][b]) * &sys.p2[m][b]);
                    }
                }
                if n == m {
                    prop_assert_eq!(acc, sys.h[n].clone());
                } else {
                    prop_assert!(acc.is_zero(), "n={} m={}", n, m);
                }
            }
        }
    }

    /// `z ↦ 1/z` exchanges `t_i` with `−s_i` and the two polynomial families.
    #[test]
    fn reflection_swaps_x_and_y(d in 1u32..=4) {
        let tab = VariableTable::two_times(2);
        let (sys, _) = circle_system(0, 2, d, 4).unwrap();
        let images: Vec<WeightedSeries> = (0..tab.len())
            .map(|i| {
                let name = tab.name(i);
                let other = if let Some(r) = name.strip_prefix('t') { format!("s{r}") } else { format!("t{}", &name[1..]) };
                -WeightedSeries::named(&tab, &other, d)
            })
            .collect();
        for n in 0..sys.x.len() {
            prop_assert_eq!(sys.x[n].compose(&tab, &images, d).unwrap(), sys.y[n].clone(), "n = {}", n);
        }
    }
}

#[test]
fn lattice_variables_vanish_at_the_origin() {
    let (sys, mats) = circle_system(0, 3, 4, 5).unwrap();
    for n in 1..sys.x.len() {
        assert!(sys.x[n].constant_term() == int(0) && sys.y[n].constant_term() == int(0), "n = {n}");
    }
    for (i, row) in mats.l1.iter().enumerate().take(mats.interior) {
        for (j, e) in row.iter().enumerate() {
            let expect = if j == i + 1 { 1 } else { 0 };
            assert_eq!(e.constant_term(), int(expect), "L1[{i}][{j}]");
        }
    }
}
