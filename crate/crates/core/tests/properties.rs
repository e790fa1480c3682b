use kpplab::analysis::level_position;
use kpplab::grid::{Grid, GridFunction, Side};
use kpplab::kernels::{constant_shift_ratio, half_line_green, smallest_passing_tau, HalfLineParams};
use kpplab::model::{CoefficientField, InitialCondition, Problem, Reaction};
use kpplab::solver::{solve, SolverConfig};
use kpplab::tumor::{apply_treatment, observed_size, total_mass};
use proptest::prelude::*;

fn profile(values: Vec<f64>) -> GridFunction {
    let n = values.len();
    let grid = Grid::interval(-((n - 1) as f64) * 0.05, n - 1, 0.1).unwrap();
    GridFunction::new(grid, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ordered_data_stay_ordered(lo in 0.05f64..0.5, gap in 0.0f64..0.5, decay in 0.2f64..2.0, amp in 0.0f64..0.8) {
        let run = |height: f64| {
            let p = Problem::new(
                1,
                15.0,
                CoefficientField::sinusoidal(1.0, amp, 2.0),
                Reaction::logistic(1.0),
                InitialCondition::Gaussian { amplitude: height, decay },
            )
            .unwrap();
            solve(&p, &SolverConfig::new(0.2, 3.0).with_comb(1.0)).unwrap()
        };
        let (low, high) = (run(lo), run(lo + gap));
        for (a, b) in low.snapshots.iter().zip(&high.snapshots) {
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!(x <= y);
                prop_assert!((0.0..=1.0).contains(x) && (0.0..=1.0).contains(y));
            }
        }
    }

    #[test]
    fn half_line_green_is_symmetric_and_vanishes_at_the_wall(
        a in 0.1f64..5.0, rate in 0.0f64..5.0, t in 0.05f64..10.0, x in 0.0f64..20.0, y in 0.0f64..20.0,
    ) {
        let pp = HalfLineParams::new(a, rate).unwrap();
        let g = half_line_green(&pp, t, x, y);
        let gs = half_line_green(&pp, t, y, x);
        prop_assert!(g >= 0.0);
        prop_assert!((g - gs).abs() <= 1e-14 * g.abs().max(1e-300));
        prop_assert_eq!(half_line_green(&pp, t, 0.0, y), 0.0);
    }

    #[test]
    fn treatment_scales_mass(values in prop::collection::vec(0.0f64..1.0, 5..60), beta in 0.01f64..0.99) {
        let u = profile(values);
        let treated = apply_treatment(&u, beta).unwrap();
        let expected = beta * total_mass(&u);
        prop_assert!((total_mass(&treated) - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn observed_size_decreases_with_threshold(values in prop::collection::vec(0.0f64..1.0, 5..60), s1 in 0.01f64..0.99, s2 in 0.01f64..0.99) {
        let u = profile(values);
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(observed_size(&u, hi) <= observed_size(&u, lo) + 1e-12);
    }

    #[test]
    fn mirrored_profile_mirrors_the_level_position(half in prop::collection::vec(0.0f64..1.0, 3..40), level in 0.05f64..0.95) {
        let mut side = half;
        side.push(0.0);
        let mut values: Vec<f64> = side.iter().rev().copied().collect();
        values.push(1.0);
        values.extend(side.iter().copied());
        let u = profile(values);
        let right = level_position(&u, level, Side::Right).unwrap();
        let left = level_position(&u, level, Side::Left).unwrap();
        prop_assert!((right + left).abs() <= 1e-9, "{} {}", right, left);
    }

    #[test]
    fn smallest_passing_tau_is_the_threshold(dim in 1usize..3, sigma in 0.05f64..0.99) {
        let tau = smallest_passing_tau(sigma, dim);
        prop_assert!((constant_shift_ratio(tau, dim) - sigma).abs() <= 1e-10);
        prop_assert!(constant_shift_ratio(tau * 1.01, dim) > sigma);
    }
}
