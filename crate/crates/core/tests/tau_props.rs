use proptest::prelude::*;

use ttlab_core::scalar::rat;
use ttlab_core::tau::{self, circle_window, moment_matrix, tau_raw, tau_schur_expansion, tau_via_e_matrix, Deformation, Group, WeightSpec};
use ttlab_core::closed_forms;
use ttlab_core::scalar::factorial;
use ttlab_core::VariableTable;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn circle_moments_are_toeplitz(k in 0u32..4, d in 2u32..6) {
        let tab = VariableTable::two_times(3);
        let m = moment_matrix(&WeightSpec::Circle { k }, 5, &Deformation::standard(&tab, d)).unwrap().entries;
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(&m[i][j], &m[i + 1][j + 1]);
            }
        }
    }

    #[test]
    fn time_derivatives_shift_moments(k in 0u32..4, kk in 1usize..=3) {
        let tab = VariableTable::two_times(3);
        let d = 6;
        let m = moment_matrix(&WeightSpec::Circle { k }, 6, &Deformation::standard(&tab, d)).unwrap().entries;
        let (ti, si) = (tab.t(kk).unwrap(), tab.s(kk).unwrap());
        for a in 0..6 - kk {
            for b in 0..6 - kk {
                let lower = d - kk as u32;
                prop_assert_eq!(m[a][b].partial(ti), m[a + kk][b].with_order(lower));
                prop_assert_eq!(m[a][b].partial(si), -m[a][b + kk].with_order(lower));
            }
        }
    }

    #[test]
    fn hankel_moments_shift_under_time_derivatives((a2, b2) in (-1i64..=3, -1i64..=3).prop_filter("alpha + beta integral", |(a, b)| (a + b) % 2 == 0), kk in 1usize..=3) {
        let tab = VariableTable::times(3);
        let d = 5;
        let spec = WeightSpec::jacobi(rat(a2, 2), rat(b2, 2)).unwrap();
        let m = moment_matrix(&spec, 6, &Deformation::standard(&tab, d)).unwrap().entries;
        let ti = tab.t(kk).unwrap();
        for a in 0..6 - kk {
            for b in 0..6 {
                prop_assert_eq!(m[a][b].partial(ti), m[a + kk][b].with_order(d - kk as u32));
            }
        }
    }

    #[test]
    fn three_tau_routes_agree(k in 0u32..=3, n in 1usize..=3, d in 1u32..=5) {
        let tab = VariableTable::two_times(3);
        let def = Deformation::standard(&tab, d);
        let m0 = circle_window(k, n + d as usize + 2);
        let direct = tau_raw(&WeightSpec::Circle { k }, n, &def).unwrap();
        prop_assert_eq!(&direct, &tau_via_e_matrix(&m0, n, &tab, d).unwrap());
        prop_assert_eq!(&direct, &tau_schur_expansion(&m0, n, &tab, d).unwrap());
    }

    #[test]
    fn half_powers_cancel_on_the_sqrt_locus(n in 1usize..=4, d in 2u32..=10) {
        let t = tau::tau(&WeightSpec::circle(), n, &Deformation::sqrt_locus(d)).unwrap().series;
        for (m, c) in t.terms() {
            prop_assert!(m[0] % 2 == 0, "odd power q^{} with coefficient {}", m[0], c);
        }
    }
}

/// The volume formulas agree with the `τ(0)·m!` constants behind the group
/// expectations.
#[test]
fn volumes_are_tau_normalizations() {
    for g in closed_forms::default_volume_groups() {
        let (alpha, beta, m, _) = g.jacobi_data().unwrap();
        let tab = VariableTable::times(1);
        let t0 = tau::tau(&WeightSpec::jacobi(alpha, beta).unwrap(), m, &Deformation::trivial(&tab, 0)).unwrap();
        let scaled = t0.normalization.scale(&num_rational::BigRational::from_integer(factorial(m as u64)));
        let v = closed_forms::selberg_volume(g).unwrap().value;
        assert_eq!(v, scaled, "{}", g.label());
    }
    assert!(closed_forms::selberg_volume(Group::U(2)).is_err());
}
