//! Multiplicative treatments, observed size above an imaging threshold, total mass, and the
//! derivative jump produced by a treatment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::model::Problem;
use crate::solver::{Operator, Simulation, Snapshot, SolverConfig};

/// Crossings whose end values differ by less than this are flagged as grazing.
pub const GRAZING_JUMP: f64 = 1e-8;
/// Sub-samples per cell side for 2D observed size.
const SUBSAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreatmentEvent {
    pub t: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreatmentSchedule {
    pub events: Vec<TreatmentEvent>,
    /// Imaging threshold.
    pub sigma: f64,
}

impl TreatmentSchedule {
    pub fn new(events: Vec<TreatmentEvent>, sigma: f64) -> Result<Self> {
        let s = Self { events, sigma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidInput(format!("imaging threshold must lie in (0, 1), got {}", self.sigma)));
        }
        for e in &self.events {
            check_beta(e.beta)?;
            if !(e.t > 0.0 && e.t.is_finite()) {
                return Err(Error::InvalidInput(format!("event time must be positive, got {}", e.t)));
            }
        }
        if self.events.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidInput("event times must be strictly increasing".into()));
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidInput(format!("treatment factor must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// `beta * state`.
pub fn apply_treatment(state: &GridFunction, beta: f64) -> Result<GridFunction> {
    check_beta(beta)?;
    let mut out = state.clone();
    for v in out.values_mut() {
        *v *= beta;
    }
    Ok(out)
}

/// Fraction of `[0, 1]` on which the linear interpolant of `a, b` exceeds `sigma`.
fn segment_fraction(a: f64, b: f64, sigma: f64) -> f64 {
    match (a > sigma, b > sigma) {
        (true, true) => 1.0,
        (false, false) => 0.0,
        (true, false) => (a - sigma) / (a - b),
        (false, true) => (b - sigma) / (b - a),
    }
}

/// Measure of `{u > sigma}`: exact for the piecewise-linear interpolant in 1D, and per-cell
/// sub-sampling of the bilinear interpolant in 2D.
pub fn observed_size(state: &GridFunction, sigma: f64) -> f64 {
    let g = state.grid();
    let v = state.values();
    let (n, h) = (g.nodes(), g.h());
    if g.dim() == 1 {
        return v.windows(2).map(|w| segment_fraction(w[0], w[1], sigma)).sum::<f64>() * h;
    }
    let mut cells = 0.0;
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let c = [v[g.index(i, j)], v[g.index(i + 1, j)], v[g.index(i, j + 1)], v[g.index(i + 1, j + 1)]];
            if c.iter().all(|&x| x > sigma) {
                cells += 1.0;
            } else if c.iter().any(|&x| x > sigma) {
                let mut hits = 0usize;
                for a in 0..SUBSAMPLES {
                    let s = (a as f64 + 0.5) / SUBSAMPLES as f64;
                    for b in 0..SUBSAMPLES {
                        let r = (b as f64 + 0.5) / SUBSAMPLES as f64;
                        let val = c[0] * (1.0 - s) * (1.0 - r) + c[1] * s * (1.0 - r) + c[2] * (1.0 - s) * r + c[3] * s * r;
                        hits += usize::from(val > sigma);
                    }
                }
                cells += hits as f64 / (SUBSAMPLES * SUBSAMPLES) as f64;
            }
        }
    }
    cells * h * h
}

/// Trapezoid integral of the state.
pub fn total_mass(state: &GridFunction) -> f64 {
    state.integral()
}

/// `beta rhs + rate beta (1 - beta) phi^2`: the right-hand side just after a treatment, from
/// the values just before it, for logistic growth.
pub fn jump_prediction(beta: f64, rate: f64, phi: f64, rhs: f64) -> f64 {
    beta * rhs + rate * beta * (1.0 - beta) * phi * phi
}

/// Discrete right-hand side of `p` at `state`.
pub fn discrete_rhs(p: &Problem, state: &GridFunction) -> Result<Vec<f64>> {
    let op = Operator::new(&p.coefficient, &p.reaction, state.grid())?;
    let mut out = vec![0.0; state.values().len()];
    op.rhs(state.values(), &mut out);
    Ok(out)
}

/// `rhs(beta phi) - [beta rhs(phi) + rate beta (1 - beta) phi^2]` with the discrete operator.
/// Only defined for homogeneous logistic growth.
pub fn jump_identity_residual(state_before: &GridFunction, rhs_before: &[f64], beta: f64, p: &Problem) -> Result<GridFunction> {
    let rate = p
        .reaction
        .logistic_rate()
        .ok_or_else(|| Error::HypothesisMismatch("the jump identity requires homogeneous logistic growth".into()))?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidInput(format!("treatment factor must lie in (0, 1], got {beta}")));
    }
    let mut after = state_before.clone();
    after.values_mut().iter_mut().for_each(|v| *v *= beta);
    let rhs_after = discrete_rhs(p, &after)?;
    let g = state_before.grid();
    let values = (0..g.len())
        .map(|k| {
            if g.is_boundary(k) {
                0.0
            } else {
                rhs_after[k] - jump_prediction(beta, rate, state_before.values()[k], rhs_before[k])
            }
        })
        .collect();
    GridFunction::new(g.clone(), values)
}

/// One row of a protocol time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolRecord {
    pub t: f64,
    pub size: f64,
    pub mass: f64,
    /// `-1` just before an event, `1` just after, `0` otherwise.
    pub event_flag: i8,
}

/// Boundary of the observed set just after an event.
#[derive(Debug, Clone, Serialize)]
pub struct EventDiagnostics {
    pub t: f64,
    pub beta: f64,
    pub size_before: f64,
    pub size_after: f64,
    pub mass_before: f64,
    pub mass_after: f64,
    /// Interpolated crossings of `beta u(t-)` with the threshold (centre line in 2D).
    pub boundary: Vec<f64>,
    /// `u_t(t-)` interpolated at each boundary point.
    pub rhs_before: Vec<f64>,
    /// `u_t(t+)` interpolated at each boundary point.
    pub rhs_after: Vec<f64>,
    /// Smallest `u_t(t-)` on the boundary (`+inf` when the boundary is empty).
    pub boundary_rhs_min: f64,
    /// Set when a crossing is nearly tangential or the boundary is empty.
    pub grazing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRun {
    pub sigma: f64,
    pub records: Vec<ProtocolRecord>,
    pub events: Vec<EventDiagnostics>,
}

impl ProtocolRun {
    /// Whether `S` is nondecreasing over the `count` records following event `index`.
    pub fn size_nondecreasing_after(&self, index: usize, count: usize) -> Option<bool> {
        let t = self.events.get(index)?.t;
        let start = self.records.iter().position(|r| r.event_flag == 1 && r.t == t)?;
        let window = self.records.get(start..=start + count)?;
        Some(window.windows(2).all(|w| w[1].size >= w[0].size))
    }
}

struct Crossing {
    x: f64,
    k: usize,
    frac: f64,
    grazing: bool,
}

fn crossings(u: &[f64], xs: &[f64], sigma: f64) -> Vec<Crossing> {
    let mut out = Vec::new();
    for k in 0..u.len() - 1 {
        let (a, b) = (u[k], u[k + 1]);
        if (a > sigma) != (b > sigma) {
            let frac = (sigma - a) / (b - a);
            out.push(Crossing { x: xs[k] + frac * (xs[k + 1] - xs[k]), k, frac, grazing: (b - a).abs() < GRAZING_JUMP });
        }
    }
    out
}

fn centre_line(values: &[f64], snapshot: &Snapshot) -> Vec<f64> {
    GridFunction::new(snapshot.grid().clone(), values.to_vec()).expect("finite").profile()
}

fn diagnostics(before: &Snapshot, after: &Snapshot, beta: f64, sigma: f64) -> EventDiagnostics {
    let g = before.grid();
    let xs: Vec<f64> = (0..g.nodes()).map(|i| g.coord(0, i)).collect();
    let u_after = after.u.profile();
    let rb = centre_line(&before.rhs, before);
    let ra = centre_line(&after.rhs, after);
    let cross = crossings(&u_after, &xs, sigma);
    let lerp = |f: &[f64], c: &Crossing| f[c.k] + c.frac * (f[c.k + 1] - f[c.k]);
    let rhs_before: Vec<f64> = cross.iter().map(|c| lerp(&rb, c)).collect();
    EventDiagnostics {
        t: before.t,
        beta,
        size_before: observed_size(&before.u, sigma),
        size_after: observed_size(&after.u, sigma),
        mass_before: total_mass(&before.u),
        mass_after: total_mass(&after.u),
        boundary: cross.iter().map(|c| c.x).collect(),
        rhs_after: cross.iter().map(|c| lerp(&ra, c)).collect(),
        boundary_rhs_min: rhs_before.iter().copied().fold(f64::INFINITY, f64::min),
        rhs_before,
        grazing: cross.is_empty() || cross.iter().any(|c| c.grazing),
    }
}

/// Solve `p` with the treatments of `sched` applied at their exact times. Event times are
/// inserted into the snapshot comb and recorded on both sides.
pub fn run_protocol(p: &Problem, sched: &TreatmentSchedule, cfg: &SolverConfig) -> Result<ProtocolRun> {
    sched.validate()?;
    if let Some(e) = sched.events.iter().find(|e| e.t >= cfg.t_final) {
        return Err(Error::InvalidInput(format!("event at t = {} is not before t_final = {}", e.t, cfg.t_final)));
    }
    let mut times = cfg.snapshot_times.clone();
    times.push(cfg.t_final);
    times.extend(sched.events.iter().map(|e| e.t));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    let mut sim = Simulation::new(p, cfg)?;
    let mut records = Vec::with_capacity(times.len() + sched.events.len());
    let mut events = Vec::with_capacity(sched.events.len());
    let record = |s: &Snapshot, flag: i8| ProtocolRecord {
        t: s.t,
        size: observed_size(&s.u, sched.sigma),
        mass: total_mass(&s.u),
        event_flag: flag,
    };
    let mut pending = sched.events.iter().peekable();
    for &t in &times {
        sim.advance_to(t)?;
        let snap = sim.snapshot();
        match pending.peek() {
            Some(e) if (e.t - t).abs() <= 1e-12 * t.max(1.0) => {
                records.push(record(&snap, -1));
                sim.scale(e.beta);
                let after = sim.snapshot();
                records.push(record(&after, 1));
                events.push(diagnostics(&snap, &after, e.beta, sched.sigma));
                pending.next();
            }
            _ => records.push(record(&snap, 0)),
        }
    }
    Ok(ProtocolRun { sigma: sched.sigma, records, events })
}

/// One row of a treatment sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreatmentSweepRow {
    pub beta: f64,
    pub sigma: f64,
    pub t0: f64,
    /// Sign of `S` one comb step after the event minus `S` just after it.
    pub ds_sign: i8,
    pub dmass_sign: i8,
    pub boundary_rhs_min: f64,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Single-event protocols over the cross product of `betas`, `sigmas` and `t0s`, run in parallel.
pub fn treatment_sweep(p: &Problem, cfg: &SolverConfig, betas: &[f64], sigmas: &[f64], t0s: &[f64]) -> Result<Vec<TreatmentSweepRow>> {
    let mut tuples = Vec::new();
    for &beta in betas {
        for &sigma in sigmas {
            for &t0 in t0s {
                tuples.push((beta, sigma, t0));
            }
        }
    }
    tuples
        .par_iter()
        .map(|&(beta, sigma, t0)| {
            let sched = TreatmentSchedule::new(vec![TreatmentEvent { t: t0, beta }], sigma)?;
            let run = run_protocol(p, &sched, cfg)?;
            let at = run.records.iter().position(|r| r.event_flag == 1).expect("event recorded");
            let (after, next) = match run.records.get(at + 1) {
                Some(next) => (run.records[at], *next),
                None => return Err(Error::InsufficientData(format!("no comb point after t = {t0}"))),
            };
            Ok(TreatmentSweepRow {
                beta,
                sigma,
                t0,
                ds_sign: sign(next.size - after.size),
                dmass_sign: sign(next.mass - after.mass),
                boundary_rhs_min: run.events[0].boundary_rhs_min,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn line(values: &[f64]) -> GridFunction {
        let g = Grid::interval(0.0, values.len() - 1, 1.0).unwrap();
        GridFunction::new(g, values.to_vec()).unwrap()
    }

    #[test]
    fn observed_size_hand_example() {
        let u = line(&[0.0, 0.2, 0.6, 0.9, 0.6, 0.2, 0.0]);
        assert!((observed_size(&u, 0.5) - 2.5).abs() < 1e-15);
        assert_eq!(observed_size(&u, 0.9), 0.0);
        let ones = line(&[1.0; 7]);
        assert_eq!(observed_size(&ones, 0.5), 6.0);
    }

    #[test]
    fn observed_size_2d_disc() {
        let g = Grid::centered(2, 4.0, 0.1).unwrap();
        let u = GridFunction::from_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
        let r2 = -2.0 * 0.5f64.ln();
        let area = std::f64::consts::PI * r2;
        assert!((observed_size(&u, 0.5) - area).abs() < 1e-2 * area);
        let full = GridFunction::from_fn(Grid::centered(2, 1.0, 0.5).unwrap(), |_| 1.0);
        assert!((observed_size(&full, 0.5) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn treatment_and_mass() {
        let g = Grid::centered(1, 5.0, 0.1).unwrap();
        let u = GridFunction::from_fn(g.clone(), |x| if x[0].abs() <= 1.0 { 1.0 } else { 0.0 });
        assert!((total_mass(&u) - 2.0).abs() <= 0.1 + 1e-12);
        let half = apply_treatment(&u, 0.5).unwrap();
        assert!((total_mass(&half) - 0.5 * total_mass(&u)).abs() < 1e-15);
        let twice = apply_treatment(&apply_treatment(&u, 0.5).unwrap(), 0.4).unwrap();
        let once = apply_treatment(&u, 0.2).unwrap();
        assert!(twice.values().iter().zip(once.values()).all(|(a, b)| (a - b).abs() < 1e-16));
        assert!(apply_treatment(&u, 1.5).is_err());
        let c = GridFunction::from_fn(g, |_| 0.3);
        assert!((total_mass(&c) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn jump_prediction_example() {
        assert!((jump_prediction(0.5, 1.0, 0.4, 0.1) - 0.09).abs() < 1e-16);
    }

    #[test]
    fn jump_identity_trivial_cases() {
        let p = Problem::homogeneous_kpp(1, 10.0, 1.0, 1.0).unwrap();
        let g = p.grid(0.1).unwrap();
        let phi = GridFunction::from_fn(g.clone(), |x| 0.9 * (-x[0] * x[0]).exp());
        let rhs = discrete_rhs(&p, &phi).unwrap();
        assert!(jump_identity_residual(&phi, &rhs, 1.0, &p).unwrap().values().iter().all(|&r| r == 0.0));
        let zero = GridFunction::zeros(g);
        let r0 = jump_identity_residual(&zero, &vec![0.0; zero.values().len()], 0.5, &p).unwrap();
        assert!(r0.values().iter().all(|&r| r == 0.0));
        let pw = Problem::piecewise_kpp(30.0, 0.5, 1.0, 0.3, 10.0, 1.0).unwrap();
        assert!(jump_identity_residual(&phi, &rhs, 0.5, &pw).is_err());
    }

    #[test]
    fn schedule_validation() {
        let e = |t, beta| TreatmentEvent { t, beta };
        assert!(TreatmentSchedule::new(vec![e(1.0, 0.5), e(1.0, 0.5)], 0.3).is_err());
        assert!(TreatmentSchedule::new(vec![e(1.0, 1.0)], 0.3).is_err());
        assert!(TreatmentSchedule::new(vec![e(1.0, 0.5)], 1.0).is_err());
        assert!(TreatmentSchedule::new(vec![e(1.0, 0.5), e(2.0, 0.9)], 0.3).is_ok());
    }

    #[test]
    fn protocol_mass_jumps_by_beta() {
        let p = Problem::homogeneous_kpp(1, 30.0, 1.0, 1.0).unwrap();
        let cfg = SolverConfig::new(0.1, 4.0).with_comb(0.5);
        let sched = TreatmentSchedule::new(vec![TreatmentEvent { t: 2.25, beta: 0.3 }], 0.2).unwrap();
        let run = run_protocol(&p, &sched, &cfg).unwrap();
        let d = &run.events[0];
        assert!((d.mass_after - 0.3 * d.mass_before).abs() <= 1e-14 * d.mass_before);
        assert_eq!(run.records.iter().filter(|r| r.event_flag != 0).count(), 2);
        assert_eq!(d.boundary.len(), 2);
    }
}
