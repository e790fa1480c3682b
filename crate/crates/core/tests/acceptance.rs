//! Acceptance criteria 1-13. Each criterion prints one PASS/FAIL line; the test fails if any
//! criterion fails.

use std::collections::BTreeMap;

use kpplab::grid::GridFunction;
use kpplab::kernels::{half_line_green, HalfLineParams};
use kpplab::model::{CoefficientField, InitialCondition, Nonlinearity, Problem, Reaction};
use kpplab::solver::{Bounds, Operator, Simulation, SolverConfig};
use kpplab::tumor::{run_protocol, TreatmentEvent, TreatmentSchedule};
use kpplab::verify::{run_suite, Check, Overrides};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Runtime limits (seconds) attached to individual criteria.
const RUNTIME_LIMITS: [(u8, f64); 3] = [(1, 120.0), (4, 30.0), (5, 5.0)];

fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let coefficient = match rng.gen_range(0..2) {
        0 => CoefficientField::constant(rng.gen_range(0.5..2.0)),
        _ => CoefficientField::sinusoidal(1.0, rng.gen_range(0.0..0.5), rng.gen_range(1.0..5.0)),
    };
    let reaction = match rng.gen_range(0..3) {
        0 => Reaction::logistic(rng.gen_range(0.2..2.0)),
        1 => Reaction::piecewise_kpp(rng.gen_range(0.2..1.0), rng.gen_range(0.2..1.0), 0.3, 3.0),
        _ => Reaction::Separable { base: 1.0, amplitude: 0.5, scale: 2.0, shape: Nonlinearity::Logistic },
    };
    Problem::new(1, 10.0, coefficient, reaction, InitialCondition::bump(1.0, 1.0)).unwrap()
}

/// Comparison principle on random ordered pairs, with the maximum principle checked by the
/// solver after every step. Returns (violations, runs).
fn comparison_pairs(rng: &mut ChaCha8Rng, pairs: usize) -> (usize, usize, f64) {
    let mut violations = 0;
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let p = random_problem(rng);
        let grid = p.grid(0.1).unwrap();
        let n = grid.len();
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.6)).collect();
        let upper: Vec<f64> = lower.iter().map(|&u| u + rng.gen_range(0.0..=(1.0 - u))).collect();
        let cfg = SolverConfig::new(0.1, 2.0);
        let make = |u: Vec<f64>| {
            let op = Operator::new(&p.coefficient, &p.reaction, &grid).unwrap();
            Simulation::from_state(op, u, 0.0, &cfg, Bounds::Unit, false).unwrap()
        };
        let (mut a, mut b) = (make(lower), make(upper));
        for k in 1..=20 {
            let t = 0.1 * k as f64;
            match (a.advance_to(t), b.advance_to(t)) {
                (Ok(()), Ok(())) => {}
                _ => {
                    violations += 1;
                    break;
                }
            }
            let gap = a.values().iter().zip(b.values()).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(gap);
            if gap > 0.0 {
                violations += 1;
                break;
            }
        }
        runs += 2;
    }
    (violations, runs, worst)
}

fn green_identity_violations(rng: &mut ChaCha8Rng, samples: usize) -> usize {
    let mut bad = 0;
    for _ in 0..samples {
        let pp = HalfLineParams::new(rng.gen_range(0.1..3.0), rng.gen_range(0.0..3.0)).unwrap();
        let t = rng.gen_range(0.05..10.0);
        let (x, y) = (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0));
        let g = half_line_green(&pp, t, x, y);
        if g != half_line_green(&pp, t, y, x) || half_line_green(&pp, t, 0.0, y) != 0.0 || g < 0.0 {
            bad += 1;
        }
    }
    bad
}

fn mass_jump_violations(rng: &mut ChaCha8Rng, runs: usize) -> (usize, f64) {
    let p = Problem::homogeneous_kpp(1, 30.0, 1.0, 1.0).unwrap();
    let cfg = SolverConfig::new(0.1, 3.0).with_comb(0.5);
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..runs {
        let beta = rng.gen_range(0.05..0.95);
        let t = rng.gen_range(0.2..2.8);
        let sched = TreatmentSchedule::new(vec![TreatmentEvent { t, beta }], 0.3).unwrap();
        let run = run_protocol(&p, &sched, &cfg).unwrap();
        let e = &run.events[0];
        let rel = (e.mass_after - beta * e.mass_before).abs() / e.mass_before;
        worst = worst.max(rel);
        // Trapezoid sums of beta * u and beta * (sum of u) agree to a few ulps.
        if rel > 1e-14 {
            bad += 1;
        }
    }
    (bad, worst)
}

fn criterion13() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b70_706c);
    let (cmp, runs, worst) = comparison_pairs(&mut rng, 20);
    let green = green_identity_violations(&mut rng, 10_000);
    let (mass, mass_worst) = mass_jump_violations(&mut rng, 10);
    Check {
        criterion: 13,
        name: "property suites".into(),
        measured: format!(
            "comparison: {cmp} violations over 20 ordered pairs ({runs} runs, max u - v {worst:e}); \
             Green identities: {green} violations over 10000 samples; mass jump: {mass} violations (max rel. error {mass_worst:e})"
        ),
        pass: cmp == 0 && green == 0 && mass == 0,
        seconds: None,
    }
}

#[test]
fn acceptance() {
    let mut checks: BTreeMap<u8, Vec<Check>> = BTreeMap::new();
    for suite in ["theorem1", "green", "prop91-scan", "theorem2", "aronson", "kernel-mono", "tumor-jump"] {
        let report = run_suite(suite, None, Overrides::default()).unwrap_or_else(|e| panic!("suite {suite}: {e}"));
        for c in report.checks {
            checks.entry(c.criterion).or_default().push(c);
        }
    }
    checks.entry(13).or_default().push(criterion13());

    let mut failed = Vec::new();
    for criterion in 1..=13u8 {
        let list = checks.get(&criterion).unwrap_or_else(|| panic!("criterion {criterion} was not measured"));
        for c in list {
            let limit = RUNTIME_LIMITS.iter().find(|l| l.0 == criterion).map(|l| l.1);
            let in_time = match (limit, c.seconds) {
                (Some(limit), Some(s)) => s <= limit,
                (Some(_), None) => false,
                _ => true,
            };
            let pass = c.pass && in_time;
            let time = c.seconds.map_or(String::new(), |s| format!(" [{s:.2} s]"));
            println!("{} criterion {criterion:>2} {}: {}{time}", if pass { "PASS" } else { "FAIL" }, c.name, c.measured);
            if !pass {
                failed.push(criterion);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn trajectory_values_stay_in_unit_interval() {
    let p = Problem::homogeneous_kpp(1, 20.0, 1.0, 1.0).unwrap();
    let traj = kpplab::solver::solve(&p, &SolverConfig::new(0.1, 5.0).with_comb(0.5)).unwrap();
    let all: Vec<&GridFunction> = traj.snapshots.iter().map(|s| &s.u).collect();
    assert!(all.iter().all(|u| u.min() >= 0.0 && u.max() <= 1.0));
}
