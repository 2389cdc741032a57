use proptest::prelude::*;
use qnls_core::phaseplane::{hamiltonian, zero_level_set, PhasePoint};
use qnls_core::spectral::{forward, inverse};
use qnls_core::{Complex64, ComplexField, Grid, GroundState, ModelParams};

fn admissible() -> impl Strategy<Value = ModelParams> {
    (1u32..=3, 0.5f64..20.0, 0.01f64..0.999).prop_map(|(alpha, a, frac)| {
        ModelParams::new(a, frac * a / (alpha as f64 + 1.0), alpha).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn existence_matches_validation(a in 0.1f64..20.0, b in 0.1f64..20.0, alpha in 1u32..=3) {
        let p = ModelParams::new(a, b, alpha).unwrap();
        prop_assert_eq!(p.admits_ground_state(), GroundState::centered(p).is_ok());
        prop_assert_eq!(p.admits_ground_state(), a > (alpha as f64 + 1.0) * b);
    }

    #[test]
    fn ground_state_is_even_and_decreasing(p in admissible(), center in -3.0f64..3.0, x in 0.0f64..8.0, dx in 1e-3f64..1.0) {
        let gs = GroundState::new(p, center).unwrap();
        let centered = GroundState::centered(p).unwrap();
        prop_assert_eq!(centered.eval(x), centered.eval(-x));
        let (l, r) = (gs.eval(center + x), gs.eval(center - x));
        prop_assert!((l - r).abs() <= 1e-12 * l.max(r), "{} {}", l, r);
        prop_assert!(gs.eval(center + x + dx) <= gs.eval(center + x));
        prop_assert!(gs.eval(center + x) <= gs.peak() * (1.0 + 4.0 * f64::EPSILON));
        prop_assert!(gs.sample(center + x).gap > 0.0);
    }

    #[test]
    fn level_set_has_zero_energy(p in admissible(), phi in -0.999f64..0.999) {
        let chi_sq = zero_level_set(phi, &p).unwrap();
        prop_assume!(chi_sq >= 0.0);
        let h = hamiltonian(PhasePoint::new(chi_sq.sqrt(), phi), &p);
        prop_assert!(h.abs() < 1e-10 * (1.0 + p.a()), "{}", h);
    }

    #[test]
    fn transform_round_trip(k in 3usize..10, l in 0.5f64..50.0, re in prop::collection::vec(-1.0f64..1.0, 512), im in prop::collection::vec(-1.0f64..1.0, 512)) {
        let n = 1 << k;
        let grid = Grid::new(n, l).unwrap();
        let f = ComplexField::new(&grid, (0..n).map(|j| Complex64::new(re[j], im[j])).collect()).unwrap();
        prop_assert!(inverse(&forward(&f)).max_abs_diff(&f) < 1e-13);
    }
}
