//! Large-time quantities extracted from trajectories: front positions and spreading speed,
//! time-shift monotonicity, sign certificates for `u_t`, and the half-line comparison setup.
//!
//! `u_t` is always the stored discrete right-hand side of a snapshot.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Side};
use crate::kernels::{halfline_quadrature_dt, t0_threshold, HalfLineParams};
use crate::model::{validate_problem, Problem};
use crate::solver::{solve_half_line, Snapshot, Trajectory};

/// Values below this are the far-field zero region, excluded from strict sign checks.
pub const ZERO_REGION: f64 = 1e-300;
/// Slack in the time-shift comparisons.
pub const SHIFT_TOLERANCE: f64 = 1e-10;
/// Fewest comb points accepted by [`estimate_tau_star`].
pub const MIN_COMB_POINTS: usize = 20;
/// Fewest crossings accepted by [`spreading_speed`].
pub const MIN_SPEED_POINTS: usize = 5;

fn line_of(u: &GridFunction) -> (Vec<f64>, Vec<f64>) {
    let g = u.grid();
    let xs = (0..g.nodes()).map(|i| g.coord(0, i)).collect();
    (xs, u.profile())
}

/// Outermost crossing of `level` on `side`, linearly interpolated from the outer node.
/// In 2D the centre line along the first axis is used.
pub fn level_position(u: &GridFunction, level: f64, side: Side) -> Result<f64> {
    let (xs, v) = line_of(u);
    let crosses = |i: usize| (v[i] >= level) != (v[i + 1] >= level);
    let n = v.len();
    let pair = match side {
        Side::Right => (0..n - 1).rev().find(|&i| crosses(i)),
        Side::Left => (0..n - 1).find(|&i| crosses(i)),
    }
    .ok_or(Error::NoCrossing { level })?;
    let (outer, inner) = match side {
        Side::Right => (pair + 1, pair),
        Side::Left => (pair, pair + 1),
    };
    if v[outer] == level {
        return Ok(xs[outer]);
    }
    if v[inner] == level {
        return Ok(xs[inner]);
    }
    let frac = (level - v[outer]) / (v[inner] - v[outer]);
    Ok(xs[outer] + frac * (xs[inner] - xs[outer]))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeedFit {
    /// Outward speed (positive when the front moves away from the origin).
    pub speed: f64,
    pub intercept: f64,
    /// `(t, position)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of the level position against time over snapshots in `window`.
pub fn spreading_speed(traj: &Trajectory, level: f64, window: (f64, f64), side: Side) -> Result<SpeedFit> {
    let points: Vec<(f64, f64)> = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= window.0 - 1e-9 && s.t <= window.1 + 1e-9)
        .filter_map(|s| level_position(&s.u, level, side).ok().map(|x| (s.t, x)))
        .collect();
    if points.len() < MIN_SPEED_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} level crossings in [{}, {}], need {MIN_SPEED_POINTS}",
            points.len(),
            window.0,
            window.1
        )));
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let slope = sxy / sxx;
    let speed = match side {
        Side::Right => slope,
        Side::Left => -slope,
    };
    Ok(SpeedFit { speed, intercept: mx - slope * mt, points })
}

fn dominates(later: &Snapshot, earlier: &Snapshot) -> bool {
    later.values().iter().zip(earlier.values()).all(|(a, b)| *a >= *b - SHIFT_TOLERANCE)
}

/// Smallest suffix start: the first index from which `ok` holds to the end.
fn suffix_start(ok: &[bool]) -> Option<usize> {
    if !*ok.last()? {
        return None;
    }
    let mut start = ok.len() - 1;
    while start > 0 && ok[start - 1] {
        start -= 1;
    }
    Some(start)
}

/// Smallest shift `T` such that `u(1 + t) >= u(1) - 1e-10` for every snapshot with `t >= T`,
/// or `+inf` when the last snapshot already fails. Requires a snapshot at `t = 1`.
pub fn find_t_monotone(traj: &Trajectory) -> Result<f64> {
    let base = traj
        .at(1.0)
        .ok_or_else(|| Error::InsufficientData("a snapshot at t = 1 is required".into()))?;
    let later: Vec<&Snapshot> = traj.snapshots.iter().filter(|s| s.t >= base.t).collect();
    let ok: Vec<bool> = later.iter().map(|s| dominates(s, base)).collect();
    Ok(suffix_start(&ok).map_or(f64::INFINITY, |i| later[i].t - base.t))
}

#[derive(Debug, Clone, Serialize)]
pub struct TauStar {
    /// Smallest admissible comb shift (`+inf` if none).
    pub tau: f64,
    pub comb_step: f64,
    pub comb_points: usize,
}

/// Smallest comb shift `k * step` such that every shift `k' >= k` satisfies
/// `u(t + k' step) >= u(t) - 1e-10` for all comb times `t >= t_floor`.
pub fn estimate_tau_star(traj: &Trajectory, t_floor: f64) -> Result<TauStar> {
    let snaps: Vec<&Snapshot> = traj.snapshots.iter().filter(|s| s.t >= t_floor - 1e-9).collect();
    let m = snaps.len();
    if m < MIN_COMB_POINTS {
        return Err(Error::InsufficientData(format!(
            "{m} comb times after t = {t_floor}, need {MIN_COMB_POINTS}"
        )));
    }
    let step = snaps[1].t - snaps[0].t;
    if snaps.windows(2).any(|w| ((w[1].t - w[0].t) - step).abs() > 1e-6 * step) {
        return Err(Error::InsufficientData("snapshot times do not form a uniform comb".into()));
    }
    let ok: Vec<bool> = (1..m).map(|k| (0..m - k).all(|i| dominates(snaps[i + k], snaps[i]))).collect();
    let tau = suffix_start(&ok).map_or(f64::INFINITY, |i| (i + 1) as f64 * step);
    Ok(TauStar { tau, comb_step: step, comb_points: m })
}

/// Certificate for one level `eps`.
#[derive(Debug, Clone, Serialize)]
pub struct EpsCertificate {
    pub eps: f64,
    /// First snapshot time after which every node with `u >= eps` has positive rhs.
    pub t_eps: Option<f64>,
    /// Snapshot times the verdict was checked on.
    pub checked: Vec<f64>,
    /// Smallest rhs over qualifying nodes on the checked snapshots.
    pub min_rhs: f64,
}

impl EpsCertificate {
    pub fn pass(&self) -> bool {
        self.t_eps.is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityCertificate {
    pub t_mono: Option<f64>,
    pub tau_star: Option<TauStar>,
    pub eps: Vec<EpsCertificate>,
    /// `(t, inf_x rhs)` over the closed truncated domain.
    pub inf_rhs: Vec<(f64, f64)>,
    pub tail_inf_rhs: f64,
}

impl MonotonicityCertificate {
    pub fn t_eps(&self, eps: f64) -> Option<f64> {
        self.eps.iter().find(|c| c.eps == eps).and_then(|c| c.t_eps)
    }
}

/// `u >= eps`, decided through the tracked complement where `u` is close to 1.
fn at_least(s: &Snapshot, k: usize, eps: f64) -> bool {
    let u = s.values()[k];
    if u > 0.5 {
        s.complement_at(k) <= 1.0 - eps
    } else {
        u >= eps
    }
}

fn eps_certificate(traj: &Trajectory, eps: f64) -> EpsCertificate {
    let per_snapshot: Vec<(bool, f64)> = traj
        .snapshots
        .iter()
        .map(|s| {
            let mut min_rhs = f64::INFINITY;
            for k in 0..s.rhs.len() {
                if at_least(s, k, eps) {
                    min_rhs = min_rhs.min(s.rhs[k]);
                }
            }
            (min_rhs > 0.0, min_rhs)
        })
        .collect();
    let ok: Vec<bool> = per_snapshot.iter().map(|p| p.0).collect();
    match suffix_start(&ok) {
        Some(i) => EpsCertificate {
            eps,
            t_eps: Some(traj.snapshots[i].t),
            checked: traj.snapshots[i..].iter().map(|s| s.t).collect(),
            min_rhs: per_snapshot[i..].iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        },
        None => EpsCertificate {
            eps,
            t_eps: None,
            checked: traj.times(),
            min_rhs: per_snapshot.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        },
    }
}

/// Sign certificates for `u_t` above each level in `eps_list`, the `inf_x u_t` curve, and the
/// shift-monotonicity quantities (`t_mono` when a snapshot at `t = 1` exists, `tau_star` when a
/// floor is given).
pub fn theorem1_report(traj: &Trajectory, eps_list: &[f64], tau_floor: Option<f64>) -> Result<MonotonicityCertificate> {
    use rayon::prelude::*;
    if eps_list.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidInput("levels must lie in (0, 1]".into()));
    }
    let eps = eps_list.par_iter().map(|&e| eps_certificate(traj, e)).collect();
    let inf_rhs: Vec<(f64, f64)> = traj
        .snapshots
        .iter()
        .map(|s| (s.t, s.rhs.iter().copied().fold(f64::INFINITY, f64::min)))
        .collect();
    let t_mono = traj.at(1.0).map(|_| find_t_monotone(traj)).transpose()?;
    let tau_star = tau_floor.map(|f| estimate_tau_star(traj, f)).transpose()?;
    Ok(MonotonicityCertificate {
        t_mono,
        tau_star,
        eps,
        tail_inf_rhs: inf_rhs.last().map_or(0.0, |p| p.1.abs()),
        inf_rhs,
    })
}

/// `inf rhs` over interior nodes only.
pub fn interior_inf_rhs(s: &Snapshot) -> f64 {
    let g = s.grid();
    (0..g.len()).filter(|&k| !g.is_boundary(k)).map(|k| s.rhs[k]).fold(f64::INFINITY, f64::min)
}

/// Homogeneous linear tail of a one-dimensional problem on one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OuterTail {
    pub diffusivity: f64,
    pub rate: f64,
}

impl OuterTail {
    pub fn params(&self) -> Result<HalfLineParams> {
        HalfLineParams::new(self.diffusivity, self.rate)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnackFit {
    /// `T0 = max over both tails of t0`.
    pub t_shift: f64,
    /// Smallest observed `u(t + T0, x ± sqrt(8 a± T0)) / u(t, x)`.
    pub c: f64,
    pub samples: usize,
    /// `(t, x, sign)` attaining the minimum.
    pub witness: Option<(f64, f64, i8)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalPositivity {
    pub minus: OuterTail,
    pub plus: OuterTail,
    pub radius: f64,
    /// First snapshot time after which every non-zero-region node has positive rhs.
    pub tau_global: Option<f64>,
    pub checked: Vec<f64>,
    pub harnack: Option<HarnackFit>,
}

const TAIL_PROBES: [f64; 4] = [1e-6, 1e-5, 1e-4, 1e-3];

fn outer_tail(p: &Problem, x_probe: &[f64]) -> Result<OuterTail> {
    let mismatch = |m: String| Error::HypothesisMismatch(m);
    let rate = p.reaction.eval(x_probe, TAIL_PROBES[0]) / TAIL_PROBES[0];
    for &s in &TAIL_PROBES {
        let f = p.reaction.eval(x_probe, s);
        if (f - rate * s).abs() > 1e-9 * rate.abs() * s {
            return Err(mismatch(format!("reaction is not linear near 0 at x = {:?}", x_probe[0])));
        }
    }
    if !(rate > 0.0) {
        return Err(mismatch(format!("non-positive linear rate {rate} at x = {}", x_probe[0])));
    }
    Ok(OuterTail { diffusivity: p.coefficient.eval(x_probe), rate })
}

fn tail_is_uniform(p: &Problem, tail: &OuterTail, from: f64, to: f64) -> bool {
    (0..=8).all(|k| {
        let x = [from + (to - from) * k as f64 / 8.0];
        (p.coefficient.eval(&x) - tail.diffusivity).abs() <= 1e-12 * tail.diffusivity
            && TAIL_PROBES.iter().all(|&s| (p.reaction.eval(&x, s) - tail.rate * s).abs() <= 1e-9 * tail.rate * s)
    })
}

/// Identify the two linear outer tails of a 1D problem, or report why it is outside that class.
pub fn outer_tails(p: &Problem) -> Result<(OuterTail, OuterTail, f64)> {
    if p.dimension() != 1 {
        return Err(Error::HypothesisMismatch("global positivity is certified in one dimension only".into()));
    }
    let radius = match (p.reaction.homogeneous_beyond(), p.coefficient.homogeneous_beyond()) {
        (Some(r), Some(c)) => r.max(c),
        _ => return Err(Error::HypothesisMismatch("problem is not homogeneous outside a bounded set".into())),
    };
    let report = validate_problem(p, 64)?;
    if let Some((h, v)) = report.failures().next() {
        return Err(Error::HypothesisMismatch(format!("{} fails: {}", h.label(), v.note)));
    }
    let edge = p.half_width();
    let minus = outer_tail(p, &[-edge])?;
    let plus = outer_tail(p, &[edge])?;
    if !tail_is_uniform(p, &minus, -edge, -radius) || !tail_is_uniform(p, &plus, radius, edge) {
        return Err(Error::HypothesisMismatch("outer tails are not uniform beyond the radius".into()));
    }
    Ok((minus, plus, radius))
}

fn harnack_fit(traj: &Trajectory, minus: &OuterTail, plus: &OuterTail) -> Result<Option<HarnackFit>> {
    let t_shift = t0_threshold(&minus.params()?)?.max(t0_threshold(&plus.params()?)?);
    let half = 0.5 * traj.problem.half_width();
    let jumps = [((8.0 * plus.diffusivity * t_shift).sqrt(), 1i8), (-(8.0 * minus.diffusivity * t_shift).sqrt(), -1i8)];
    let mut fit = HarnackFit { t_shift, c: f64::INFINITY, samples: 0, witness: None };
    for s in traj.snapshots.iter().filter(|s| s.t >= 1.0 - 1e-9) {
        let Some(later) = traj.at(s.t + t_shift) else { continue };
        let g = s.grid();
        for k in 0..g.len() {
            let x = g.coord(0, k);
            let u = s.values()[k];
            if x.abs() > half || u < ZERO_REGION {
                continue;
            }
            for &(jump, sign) in &jumps {
                let target = x + jump;
                if target.abs() > half {
                    continue;
                }
                let Some(v) = later.u.interpolate(&[target]) else { continue };
                fit.samples += 1;
                let ratio = v / u;
                if ratio < fit.c {
                    fit.c = ratio;
                    fit.witness = Some((s.t, x, sign));
                }
            }
        }
    }
    Ok((fit.samples > 0).then_some(fit))
}

/// Earliest time after which `u_t > 0` at every node outside the zero region, for 1D problems
/// with linear homogeneous tails, together with the empirical shift-Harnack constant.
pub fn theorem2_report(traj: &Trajectory) -> Result<GlobalPositivity> {
    let (minus, plus, radius) = outer_tails(&traj.problem)?;
    let ok: Vec<bool> = traj
        .snapshots
        .iter()
        .map(|s| {
            let g = s.grid();
            (0..g.len()).all(|k| g.is_boundary(k) || s.values()[k] < ZERO_REGION || s.rhs[k] > 0.0)
        })
        .collect();
    let start = suffix_start(&ok);
    Ok(GlobalPositivity {
        minus,
        plus,
        radius,
        tau_global: start.map(|i| traj.snapshots[i].t),
        checked: start.map_or_else(|| traj.times(), |i| traj.snapshots[i..].iter().map(|s| s.t).collect()),
        harnack: harnack_fit(traj, &minus, &plus)?,
    })
}

/// A sampled point where a strict sign check failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignViolation {
    pub t: f64,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HalfLineVerdict {
    pub side: Side,
    pub t0: f64,
    pub samples: usize,
    pub min_rhs: f64,
    pub violations: Vec<SignViolation>,
    /// Smallest closed-form `w_t` over the same samples.
    pub closed_form_min: f64,
    pub closed_form_violations: usize,
}

impl HalfLineVerdict {
    pub fn pass(&self) -> bool {
        self.samples > 0 && self.violations.is_empty() && self.closed_form_violations == 0
    }
}

/// Boundary trace for [`prop91_verify`].
pub type Trace = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn check_trace(g: &Trace, t_max: f64) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for k in 0..=400 {
        let t = t_max * k as f64 / 400.0;
        let v = g(t);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidInput(format!("boundary trace is negative or non-finite at t = {t}")));
        }
        if v < prev {
            return Err(Error::InvalidInput(format!("boundary trace decreases at t = {t}")));
        }
        prev = v;
    }
    Ok(())
}

/// Data mirrored onto `[0, length]` so that the closed form applies.
fn to_right_side(v0: &GridFunction, side: Side) -> Result<GridFunction> {
    match side {
        Side::Right => Ok(v0.clone()),
        Side::Left => {
            let g = v0.grid();
            let grid = Grid::interval(0.0, g.nodes() - 1, g.h())?;
            GridFunction::new(grid, v0.values().iter().rev().copied().collect())
        }
    }
}

/// Solve `v_t = a v_xx + rate v` on a truncated half-line with trace `g` at 0 and check
/// `v_t > 0` at every node with `|x| >= sqrt(8 a t)` within `reliable_fraction` of the domain,
/// for each `t` in `t_grid` with `t >= t0`. The Green-function part `w_t` is checked on the same
/// samples by quadrature.
pub fn prop91_verify(
    pp: &HalfLineParams,
    v0: &GridFunction,
    g: Trace,
    t_grid: &[f64],
    side: Side,
    reliable_fraction: f64,
) -> Result<HalfLineVerdict> {
    if v0.values().iter().any(|&v| v < 0.0) || v0.values().iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidInput("initial data must be non-negative and nontrivial".into()));
    }
    let t0 = t0_threshold(pp)?;
    let times: Vec<f64> = t_grid.iter().copied().filter(|&t| t >= t0).collect();
    if times.is_empty() {
        return Err(Error::InsufficientData(format!("no sample time at or after t0 = {t0}")));
    }
    let t_max = times.iter().copied().fold(0.0, f64::max);
    check_trace(&g, t_max)?;
    let trace = g.clone();
    let snaps = solve_half_line(pp.diffusivity, pp.rate, v0, side, move |t| trace(t), &times)?;
    let right_data = to_right_side(v0, side)?;
    let grid = v0.grid();
    let reach = reliable_fraction * (grid.nodes() - 1) as f64 * grid.h();
    let mut verdict = HalfLineVerdict {
        side,
        t0,
        samples: 0,
        min_rhs: f64::INFINITY,
        violations: Vec::new(),
        closed_form_min: f64::INFINITY,
        closed_form_violations: 0,
    };
    for s in &snaps {
        let wt = halfline_quadrature_dt(pp, &right_data, s.t)?;
        let start = pp.region_start(s.t);
        for k in 0..grid.len() {
            let x = grid.coord(0, k);
            if x.abs() < start || x.abs() > reach || s.values()[k] < ZERO_REGION {
                continue;
            }
            verdict.samples += 1;
            let rhs = s.rhs[k];
            verdict.min_rhs = verdict.min_rhs.min(rhs);
            if !(rhs > 0.0) {
                verdict.violations.push(SignViolation { t: s.t, x, value: rhs });
            }
            let mirror = match side {
                Side::Right => k,
                Side::Left => grid.len() - 1 - k,
            };
            let w = wt.values()[mirror];
            verdict.closed_form_min = verdict.closed_form_min.min(w);
            if !(w > 0.0) {
                verdict.closed_form_violations += 1;
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoefficientField, InitialCondition, Reaction};
    use crate::solver::SolverConfig;

    fn line(values: &[f64]) -> GridFunction {
        let g = Grid::interval(0.0, values.len() - 1, 1.0).unwrap();
        GridFunction::new(g, values.to_vec()).unwrap()
    }

    #[test]
    fn level_position_hand_example() {
        let u = line(&[0.0, 0.2, 0.6, 0.9]);
        assert!((level_position(&u, 0.5, Side::Right).unwrap() - 1.75).abs() < 1e-15);
        assert_eq!(level_position(&u, 0.6, Side::Right).unwrap(), 2.0);
        assert!(matches!(level_position(&u, 0.95, Side::Right), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn level_position_symmetric_profile() {
        let g = Grid::centered(1, 10.0, 0.1).unwrap();
        let u = GridFunction::from_fn(g, |x| (-x[0] * x[0] / 8.0).exp());
        let r = level_position(&u, 0.3, Side::Right).unwrap();
        let l = level_position(&u, 0.3, Side::Left).unwrap();
        assert!((r + l).abs() < 1e-12 && r > 0.0);
    }

    fn synthetic(times: &[f64], f: impl Fn(f64, f64) -> f64, p: &Problem) -> Trajectory {
        let grid = p.grid(0.5).unwrap();
        let snapshots = times
            .iter()
            .map(|&t| {
                let u = GridFunction::from_fn(grid.clone(), |x| f(t, x[0]));
                let d = 1e-6;
                let rhs = (0..grid.len()).map(|k| {
                    let x = grid.coord(0, k);
                    (f(t + d, x) - f(t - d, x)) / (2.0 * d)
                });
                Snapshot { t, u, rhs: rhs.collect(), complement: None }
            })
            .collect();
        Trajectory { problem: p.clone(), config: SolverConfig::new(0.5, 1.0), snapshots, warnings: vec![] }
    }

    #[test]
    fn monotone_synthetic_trajectories() {
        let p = Problem::homogeneous_kpp(1, 10.0, 1.0, 1.0).unwrap();
        let times: Vec<f64> = (0..=30).map(|k| k as f64 * 0.5).collect();
        let traj = synthetic(&times, |t, _| 1.0 - (-t).exp(), &p);
        assert_eq!(find_t_monotone(&traj).unwrap(), 0.0);
        let traj = synthetic(&times, |t, x| (t - x.abs()).exp().min(1.0), &p);
        let tau = estimate_tau_star(&traj, 0.0).unwrap();
        assert_eq!(tau.tau, 0.5);
        let shifted = estimate_tau_star(&traj.shifted(3.25), 3.25).unwrap();
        assert_eq!(shifted.tau, tau.tau);
        assert!(matches!(estimate_tau_star(&traj, 10.0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn heat_decay_has_no_monotone_shift() {
        let p = Problem::new(1, 10.0, CoefficientField::constant(1.0), Reaction::None, InitialCondition::bump(1.0, 1.0))
            .unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let traj = synthetic(&times, |t, x| (-x * x / (4.0 * (t + 1.0))).exp() / (t + 1.0).sqrt(), &p);
        assert_eq!(find_t_monotone(&traj).unwrap(), f64::INFINITY);
    }

    #[test]
    fn vacuous_and_failing_levels() {
        let p = Problem::homogeneous_kpp(1, 10.0, 1.0, 1.0).unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let traj = synthetic(&times, |t, x| 0.5 * (-x * x / (4.0 * (t + 1.0))).exp() / (t + 1.0).sqrt(), &p);
        let cert = theorem1_report(&traj, &[1.0, 0.1], None).unwrap();
        assert_eq!(cert.t_eps(1.0), Some(0.0));
        assert!(cert.eps[1].t_eps.is_none() || cert.eps[1].min_rhs > 0.0);
    }

    #[test]
    fn global_positivity_rejects_other_classes() {
        let p = Problem::homogeneous_kpp(2, 10.0, 1.0, 1.0).unwrap();
        assert!(matches!(outer_tails(&p), Err(Error::HypothesisMismatch(_))));
        let logistic = Problem::homogeneous_kpp(1, 10.0, 1.0, 1.0).unwrap();
        assert!(matches!(outer_tails(&logistic), Err(Error::HypothesisMismatch(_))));
        let pw = Problem::piecewise_kpp(30.0, 0.5, 1.0, 0.3, 10.0, 1.0).unwrap();
        let (m, pl, r) = outer_tails(&pw).unwrap();
        assert_eq!((m.rate, pl.rate, m.diffusivity, r), (0.5, 1.0, 1.0, 10.0));
    }

    #[test]
    fn trace_checks() {
        let pp = HalfLineParams::new(1.0, 1.0).unwrap();
        let g = Grid::interval(0.0, 100, 0.1).unwrap();
        let v0 = GridFunction::from_fn(g, |x| if (1.0..=2.0).contains(&x[0]) { 1.0 } else { 0.0 });
        let bad: Trace = Arc::new(|t: f64| (-t).exp());
        assert!(prop91_verify(&pp, &v0, bad, &[2.5], Side::Right, 0.5).is_err());
    }
}
