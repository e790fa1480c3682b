//! Values checked against independent oracles: refinement runs, rescaled runs, closed forms
//! and finite differences evaluated here rather than in the library.

use std::sync::Arc;

use kpplab::analysis::{estimate_tau_star, find_t_monotone, prop91_verify, spreading_speed, theorem1_report};
use kpplab::grid::{Grid, GridFunction, Side};
use kpplab::kernels::{
    check_prop61, for_each_green_sample, half_line_green, half_line_green_dt, t0_threshold, GreenScanSpec, HalfLineParams,
    RatioWindow,
};
use kpplab::model::{CoefficientField, InitialCondition, Problem, Reaction};
use kpplab::solver::{comb, solve, SolverConfig};
use kpplab::tumor::observed_size;

/// Fourth-order central difference in `t`.
fn dt_oracle(pp: &HalfLineParams, t: f64, x: f64, y: f64) -> f64 {
    let d = 2e-4 * t;
    let g = |s: f64| half_line_green(pp, s, x, y);
    (-g(t + 2.0 * d) + 8.0 * g(t + d) - 8.0 * g(t - d) + g(t - 2.0 * d)) / (12.0 * d)
}

#[test]
fn green_time_derivative_matches_numerical_differentiation() {
    let spec = GreenScanSpec { n_t: 5, n_x: 10, n_y: 20, ..GreenScanSpec::default() };
    let mut worst: f64 = 0.0;
    for_each_green_sample(&spec, |s| {
        let pp = HalfLineParams::new(s.a, s.lambda).unwrap();
        let fd = dt_oracle(&pp, s.t, s.x, s.y);
        worst = worst.max(((fd - s.g_t) / s.g_t).abs());
    })
    .unwrap();
    assert!(worst <= 1e-5, "worst relative error {worst:e}");
    // A point outside the guaranteed region, where G_t changes sign, is also reproduced.
    let pp = HalfLineParams::new(1.0, 0.2).unwrap();
    let exact = half_line_green_dt(&pp, 0.5, 0.3, 0.4);
    assert!(((dt_oracle(&pp, 0.5, 0.3, 0.4) - exact) / exact).abs() <= 1e-5);
}

#[test]
fn t0_frozen_values() {
    let t1 = t0_threshold(&HalfLineParams::new(1.0, 1.0).unwrap()).unwrap();
    assert!((t1 - 2.0819767).abs() <= 1e-6);
    let t2 = t0_threshold(&HalfLineParams::new(3.0, 2.0).unwrap()).unwrap();
    assert!((t2 - 1.0409884).abs() <= 1e-6);
}

#[test]
fn shift_ratio_matches_closed_form_for_constant_diffusion() {
    let window = RatioWindow::new(40.0, 0.05, 15.0);
    for &(d, tau) in &[(1.0, 2.0), (1.0, 4.0), (0.5, 6.0), (2.0, 3.0)] {
        let r = check_prop61(&CoefficientField::constant(d), tau, 0.5, &window).unwrap();
        let exact = (tau / (tau + 1.0)).sqrt();
        assert!(((r.min_ratio - exact) / exact).abs() <= 1e-3, "D {d} tau {tau}: {} vs {exact}", r.min_ratio);
        assert!(r.argmin[0].abs() <= 0.05);
        // Away from the origin the ratio follows the Gaussian factor.
        let (x, ratio) = r.profile.iter().copied().find(|p| (p.0 - 5.0).abs() < 1e-9).unwrap();
        let analytic = exact * (x * x * (1.0 / tau - 1.0 / (tau + 1.0)) / (4.0 * d)).exp();
        assert!(((ratio - analytic) / analytic).abs() <= 1e-3);
    }
}

#[test]
fn speed_scales_with_root_diffusivity() {
    let speed = |a: f64| {
        let p = Problem::homogeneous_kpp(1, 200.0, a, 1.0).unwrap();
        let traj = solve(&p, &SolverConfig::new(0.1, 60.0).with_comb(1.0)).unwrap();
        spreading_speed(&traj, 0.5, (30.0, 60.0), Side::Right).unwrap().speed
    };
    let ratio = speed(2.0) / speed(1.0);
    assert!((ratio / 2f64.sqrt() - 1.0).abs() <= 0.05, "ratio {ratio}");
}

#[test]
fn speed_is_level_independent() {
    let p = Problem::homogeneous_kpp(1, 200.0, 1.0, 1.0).unwrap();
    let traj = solve(&p, &SolverConfig::new(0.1, 80.0).with_comb(1.0)).unwrap();
    let reference = spreading_speed(&traj, 0.5, (40.0, 80.0), Side::Right).unwrap().speed;
    for level in [0.3, 0.4, 0.6, 0.7] {
        let s = spreading_speed(&traj, level, (40.0, 80.0), Side::Right).unwrap().speed;
        assert!((s / reference - 1.0).abs() <= 0.01, "level {level}: {s} vs {reference}");
        let left = spreading_speed(&traj, level, (40.0, 80.0), Side::Left).unwrap().speed;
        assert!((left - s).abs() <= 1e-9);
    }
}

#[test]
fn heat_front_slows_down() {
    let p = Problem::new(1, 100.0, CoefficientField::constant(1.0), Reaction::None, InitialCondition::bump(1.0, 1.0)).unwrap();
    let traj = solve(&p, &SolverConfig::new(0.1, 80.0).with_comb(2.0)).unwrap();
    let early = spreading_speed(&traj, 0.01, (10.0, 20.0), Side::Right).unwrap().speed;
    let late = spreading_speed(&traj, 0.01, (40.0, 80.0), Side::Right).unwrap().speed;
    assert!(late < early && late < 0.2, "early {early}, late {late}");
    assert_eq!(find_t_monotone(&{
        let mut cfg = SolverConfig::new(0.1, 10.0).with_comb(1.0);
        cfg.t_final = 10.0;
        solve(&p, &cfg).unwrap()
    })
    .unwrap(), f64::INFINITY);
}

fn kpp_run(h: f64, comb_step: f64, t_final: f64) -> kpplab::solver::Trajectory {
    let p = Problem::homogeneous_kpp(1, 120.0, 1.0, 1.0).unwrap();
    let mut times = comb(0.0, t_final, comb_step);
    times.push(1.0);
    solve(&p, &SolverConfig::new(h, t_final).with_snapshot_times(times)).unwrap()
}

#[test]
fn monotone_shift_is_stable_under_refinement() {
    let coarse = find_t_monotone(&kpp_run(0.1, 0.5, 20.0)).unwrap();
    let fine = find_t_monotone(&kpp_run(0.05, 0.5, 20.0)).unwrap();
    assert!(coarse.is_finite() && (coarse - fine).abs() <= 0.5 + 1e-9, "{coarse} vs {fine}");
}

#[test]
fn tau_star_shrinks_with_comb_refinement() {
    let mut previous = f64::INFINITY;
    for step in [1.0, 0.5, 0.25] {
        let tau = estimate_tau_star(&kpp_run(0.1, step, 45.0), 20.0).unwrap();
        assert!(tau.tau <= 2.0 * step + 1e-12, "step {step}: {}", tau.tau);
        assert!(tau.tau <= previous);
        previous = tau.tau;
    }
}

#[test]
fn level_certificate_is_stable_under_comb_refinement() {
    let coarse = theorem1_report(&kpp_run(0.1, 1.0, 20.0), &[0.1], None).unwrap().t_eps(0.1).unwrap();
    let fine = theorem1_report(&kpp_run(0.1, 0.5, 20.0), &[0.1], None).unwrap().t_eps(0.1).unwrap();
    assert!((coarse - fine).abs() <= 1.0, "{coarse} vs {fine}");
}

#[test]
fn untreated_invasion_fills_the_box() {
    let p = Problem::homogeneous_kpp(1, 20.0, 1.0, 1.0).unwrap();
    let mut cfg = SolverConfig::new(0.1, 30.0).with_comb(1.0);
    cfg.boundary_leak_abort = 1.0;
    let traj = solve(&p, &cfg).unwrap();
    let sizes: Vec<f64> = traj.snapshots.iter().map(|s| observed_size(&s.u, 0.3)).collect();
    assert!(*sizes.last().unwrap() >= 0.9 * 40.0);
    assert!(sizes.windows(2).skip(2).all(|w| w[1] >= w[0]));
}

#[test]
fn zero_trace_half_line_matches_closed_form_region() {
    let pp = HalfLineParams::new(1.0, 1.0).unwrap();
    let t0 = t0_threshold(&pp).unwrap();
    let grid = Grid::interval(0.0, 1000, 0.04).unwrap();
    let v0 = GridFunction::from_fn(grid, |x| if (1.0..=2.0).contains(&x[0]) { 1.0 } else { 0.0 });
    let times: Vec<f64> = (0..6).map(|k| t0 * (1.0 + 0.4 * k as f64)).collect();
    let v = prop91_verify(&pp, &v0, Arc::new(|_| 0.0), &times, Side::Right, 0.5).unwrap();
    assert!(v.pass() && v.samples > 0, "{v:?}");
}
