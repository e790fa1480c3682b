//! Self-contained verification suites with pinned configurations. Each check carries the
//! acceptance criterion it measures.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::Deserialize;

use crate::analysis::{interior_inf_rhs, prop91_verify, spreading_speed, theorem1_report, theorem2_report, Trace};
use crate::config::{ProblemSection, RunConfig, SolverSection};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Side};
use crate::kernels::{
    check_prop61, constant_shift_ratio, fit_aronson_k, green_dt_scan, halfline_quadrature, scan_gradient_amplitude,
    t0_threshold, AronsonWindow, GreenScanSpec, HalfLineParams, RatioWindow,
};
use crate::model::{CoefficientField, Problem};
use crate::report;
use crate::solver::{comb, fundamental_solution, solve, solve_half_line, SolverConfig};
use crate::tumor::{discrete_rhs, jump_identity_residual, run_protocol, TreatmentEvent, TreatmentSchedule};

pub const SUITES: [&str; 7] = ["theorem1", "theorem2", "green", "kernel-mono", "aronson", "tumor-jump", "prop91-scan"];

/// One measured check.
#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: String,
    pub pass: bool,
    /// Wall time of the computation behind this check, when measured separately.
    pub seconds: Option<f64>,
}

impl Check {
    fn timed(mut self, since: Instant) -> Self {
        self.seconds = Some(since.elapsed().as_secs_f64());
        self
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!("[{}] criterion {:>2} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.criterion, c.name, c.measured)
            })
            .collect()
    }
}

fn check(criterion: u8, name: &str, measured: String, pass: bool) -> Check {
    Check { criterion, name: name.into(), measured, pass, seconds: None }
}

/// Parameter overrides accepted by `kernel-mono`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tau: Option<f64>,
    pub sigma: Option<f64>,
}

fn pinned(suite: &str) -> Option<&'static str> {
    Some(match suite {
        "theorem1" => include_str!("../configs/verify/theorem1.toml"),
        "theorem2" => include_str!("../configs/verify/theorem2.toml"),
        "green" => include_str!("../configs/verify/green.toml"),
        "kernel-mono" => include_str!("../configs/verify/kernel-mono.toml"),
        "aronson" => include_str!("../configs/verify/aronson.toml"),
        "tumor-jump" => include_str!("../configs/verify/tumor-jump.toml"),
        "prop91-scan" => include_str!("../configs/verify/prop91-scan.toml"),
        _ => return None,
    })
}

/// The pinned configuration text of a suite.
pub fn pinned_config(suite: &str) -> Result<&'static str> {
    pinned(suite).ok_or_else(|| Error::InvalidInput(format!("unknown suite `{suite}`; expected one of {SUITES:?}")))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
}

/// Run a suite from its pinned configuration, writing artifacts to `out` when given.
pub fn run_suite(suite: &str, out: Option<&Path>, overrides: Overrides) -> Result<SuiteReport> {
    let text = pinned_config(suite)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let checks = match suite {
        "theorem1" => theorem1(&parse(text)?, out)?,
        "theorem2" => theorem2(&parse(text)?, out)?,
        "green" => green(&parse(text)?)?,
        "kernel-mono" => kernel_mono(&parse(text)?, overrides, out)?,
        "aronson" => aronson(&parse(text)?)?,
        "tumor-jump" => tumor_jump(&parse(text)?, out)?,
        "prop91-scan" => prop91(&parse(text)?, out)?,
        _ => unreachable!("pinned_config rejects unknown suites"),
    };
    Ok(SuiteReport { suite: suite.into(), checks, seconds: start.elapsed().as_secs_f64() })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotonicitySuite {
    pub speed_target: f64,
    pub speed_tolerance: f64,
    pub t_eps_max: f64,
    pub inf_rhs_tolerance: f64,
    pub inf_rhs_reference: f64,
    pub refine: bool,
    pub run: RunConfig,
}

pub fn theorem1(s: &MonotonicitySuite, out: Option<&Path>) -> Result<Vec<Check>> {
    s.run.validate()?;
    let started = Instant::now();
    let p = s.run.problem()?;
    let cfg = s.run.solver_config();
    let traj = solve(&p, &cfg)?;
    let level = s.run.analysis.levels[0];
    let eps = s.run.analysis.eps[0];
    let window = s.run.analysis.speed_window.ok_or_else(|| Error::Config("speed_window is required".into()))?;
    let fit = spreading_speed(&traj, level, (window[0], window[1]), Side::Right)?;
    let cert = theorem1_report(&traj, &[eps], s.run.analysis.tau_floor)?;
    let mut checks = vec![check(
        1,
        "spreading speed",
        format!("level {level} speed {:.6} (target {} ± {})", fit.speed, s.speed_target, s.speed_tolerance),
        (fit.speed - s.speed_target).abs() <= s.speed_tolerance,
    )
    .timed(started)];
    let t_eps = cert.t_eps(eps);
    let mut refined_msg = String::new();
    let mut refined_ok = true;
    if s.refine {
        let mut fine = cfg.clone();
        fine.h /= 2.0;
        let traj_fine = solve(&p, &fine)?;
        let t_fine = theorem1_report(&traj_fine, &[eps], None)?.t_eps(eps);
        let step = s.run.solver.comb.unwrap_or(f64::INFINITY);
        refined_ok = match (t_eps, t_fine) {
            (Some(a), Some(b)) => (a - b).abs() <= step + 1e-9,
            _ => false,
        };
        refined_msg = format!(", under h/2 T_eps = {t_fine:?}");
    }
    checks.push(check(
        2,
        "level certificate",
        format!("eps {eps} T_eps = {t_eps:?} (max {}){refined_msg}", s.t_eps_max),
        t_eps.is_some_and(|t| t <= s.t_eps_max) && refined_ok,
    ));
    let reference = cert
        .inf_rhs
        .iter()
        .find(|p| (p.0 - s.inf_rhs_reference).abs() < 1e-9)
        .map(|p| p.1.abs())
        .ok_or_else(|| Error::InsufficientData(format!("no snapshot at t = {}", s.inf_rhs_reference)))?;
    let interior = interior_inf_rhs(traj.last());
    checks.push(check(
        3,
        "inf of u_t",
        format!(
            "|inf rhs| at t_final {:e}, at t = {} {:e}; interior-only inf at t_final {:e}",
            cert.tail_inf_rhs, s.inf_rhs_reference, reference, interior
        ),
        cert.tail_inf_rhs <= s.inf_rhs_tolerance && cert.tail_inf_rhs <= reference && interior.abs() <= s.inf_rhs_tolerance,
    ));
    if let Some(dir) = out {
        report::write_inf_rhs(&dir.join("inf_rhs.csv"), &cert)?;
        report::write_t_eps(&dir.join("t_eps.csv"), &cert)?;
        report::write_level_positions(&dir.join("level_pos.csv"), &fit)?;
    }
    Ok(checks)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivitySuite {
    pub run: RunConfig,
}

pub fn theorem2(s: &PositivitySuite, out: Option<&Path>) -> Result<Vec<Check>> {
    s.run.validate()?;
    let p = s.run.problem()?;
    let (minus, plus, _) = crate::analysis::outer_tails(&p)?;
    let shift = t0_threshold(&minus.params()?)?.max(t0_threshold(&plus.params()?)?);
    let mut cfg = s.run.solver_config();
    let t_final = cfg.t_final;
    let step = s.run.solver.comb.unwrap_or(1.0);
    cfg.snapshot_times.extend(comb(1.0, t_final - shift, step).into_iter().map(|t| t + shift));
    let traj = solve(&p, &cfg)?;
    let r = theorem2_report(&traj)?;
    let c = r.harnack.as_ref().map_or(0.0, |h| h.c);
    if let Some(dir) = out {
        let text = report::format_certificate(&report::CertificateParts { global: Some(&r), ..Default::default() });
        report::write_text(&dir.join("certificate.txt"), &text)?;
    }
    Ok(vec![check(
        7,
        "global positivity",
        format!("tau_global = {:?} over {} later snapshots; Harnack T0 = {shift:.6}, C = {c:.4e}", r.tau_global, r.checked.len()),
        r.tau_global.is_some() && c > 0.0,
    )])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenSuite {
    pub diffusivity: f64,
    pub rate: f64,
    pub support: [f64; 2],
    pub t: f64,
    pub h: f64,
    pub length: f64,
    pub tolerance: f64,
}

fn indicator_data(support: [f64; 2], length: f64, h: f64) -> Result<GridFunction> {
    let cells = (length / h).round() as usize;
    let g = Grid::interval(0.0, cells, h)?;
    Ok(GridFunction::from_fn(g, |x| if x[0] >= support[0] - 1e-12 && x[0] <= support[1] + 1e-12 { 1.0 } else { 0.0 }))
}

/// Relative max-norm gap between the Green quadrature and the zero-boundary PDE solve.
pub fn green_gap(s: &GreenSuite) -> Result<f64> {
    let pp = HalfLineParams::new(s.diffusivity, s.rate)?;
    let v0 = indicator_data(s.support, s.length, s.h)?;
    let w = halfline_quadrature(&pp, &v0, s.t)?;
    let v = solve_half_line(s.diffusivity, s.rate, &v0, Side::Right, |_| 0.0, &[s.t])?;
    let gap = v[0].values().iter().zip(w.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(gap / w.max())
}

pub fn green(s: &GreenSuite) -> Result<Vec<Check>> {
    let started = Instant::now();
    let err = green_gap(s)?;
    Ok(vec![check(4, "Green quadrature vs PDE", format!("relative max error {err:.3e} (max {})", s.tolerance), err <= s.tolerance)
        .timed(started)])
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Zero,
    OneMinusExp,
}

impl TraceKind {
    pub fn trace(self) -> Trace {
        match self {
            Self::Zero => Arc::new(|_| 0.0),
            Self::OneMinusExp => Arc::new(|t: f64| -(-t).exp_m1()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfLineSolution {
    pub diffusivity: f64,
    pub rate: f64,
    pub support: [f64; 2],
    pub trace: TraceKind,
    pub h: f64,
    pub length: f64,
    pub n_t: usize,
    pub t_factor: f64,
    pub reliable_fraction: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop91Suite {
    pub t0_expected: f64,
    pub t0_tolerance: f64,
    pub scan: GreenScanSpec,
    pub solution: HalfLineSolution,
}

pub fn prop91(s: &Prop91Suite, out: Option<&Path>) -> Result<Vec<Check>> {
    let started = Instant::now();
    let scan = green_dt_scan(&s.scan)?;
    let t0 = t0_threshold(&HalfLineParams::new(1.0, 1.0)?)?;
    let weakest = scan.weakest.map_or(f64::NAN, |w| w.g_t);
    let mut checks = vec![check(
        5,
        "kernel derivative scan",
        format!("{} samples, {} with G_t <= 0, min G_t {weakest:.3e}; t0(1) = {t0:.9}", scan.points, scan.violations.len()),
        scan.points > 0 && scan.violations.is_empty() && (t0 - s.t0_expected).abs() <= s.t0_tolerance,
    )
    .timed(started)];
    if let Some(dir) = out {
        report::write_green_scan(&dir.join("green_scan.csv"), &s.scan)?;
    }
    let sol = &s.solution;
    let pp = HalfLineParams::new(sol.diffusivity, sol.rate)?;
    let t0 = t0_threshold(&pp)?;
    let times: Vec<f64> = (0..sol.n_t)
        .map(|k| t0 + (sol.t_factor - 1.0) * t0 * k as f64 / (sol.n_t.max(2) - 1) as f64)
        .collect();
    let v0 = indicator_data(sol.support, sol.length, sol.h)?;
    let right = prop91_verify(&pp, &v0, sol.trace.trace(), &times, Side::Right, sol.reliable_fraction)?;
    let left_grid = Grid::interval(-sol.length, v0.grid().nodes() - 1, sol.h)?;
    let v0_left = GridFunction::new(left_grid, v0.values().iter().rev().copied().collect())?;
    let left = prop91_verify(&pp, &v0_left, sol.trace.trace(), &times, Side::Left, sol.reliable_fraction)?;
    let mirrored = left.samples == right.samples && left.violations.len() == right.violations.len() && left.min_rhs == right.min_rhs;
    checks.push(check(
        6,
        "half-line solution sign",
        format!(
            "{} samples, {} violations, min v_t {:.3e}, min closed-form w_t {:.3e}, mirror identical: {mirrored}",
            right.samples,
            right.violations.len(),
            right.min_rhs,
            right.closed_form_min
        ),
        right.pass() && left.pass() && mirrored,
    ));
    Ok(checks)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AronsonSuite {
    pub coefficient: CoefficientField,
    pub half_width: f64,
    pub h: f64,
    pub times: Vec<f64>,
    pub radius: f64,
    pub floor: f64,
    pub k_max: f64,
}

pub fn aronson(s: &AronsonSuite) -> Result<Vec<Check>> {
    let grid = Grid::centered(1, s.half_width, s.h)?;
    let kernels = fundamental_solution(&s.coefficient, &s.times, &[0.0], &grid)?;
    let window = AronsonWindow { times: s.times.clone(), radius: s.radius, floor: s.floor };
    let fit = fit_aronson_k(&kernels, &[0.0], &window);
    Ok(vec![match fit {
        Ok(fit) => check(
            8,
            "Gaussian sandwich",
            format!(
                "K = {:.3} (normalised {:.3}) over {} points, tightest {:?} at t = {}, x = {:.2} (max {})",
                fit.k, fit.k_normalized, fit.points, fit.witness.bound, fit.witness.t, fit.witness.x[0], s.k_max
            ),
            fit.k <= s.k_max,
        ),
        Err(e) => check(8, "Gaussian sandwich", format!("no constant: {e}"), false),
    }])
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftCase {
    pub tau: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeScanSpec {
    pub amplitudes: Vec<f64>,
    pub scale: f64,
    pub tau: f64,
    pub sigma: f64,
    pub required: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelMonoSuite {
    pub half_width: f64,
    pub h: f64,
    pub radius: f64,
    pub ratio_tolerance: f64,
    pub positive: ShiftCase,
    pub negative: ShiftCase,
    pub amplitude_scan: AmplitudeScanSpec,
}

pub fn kernel_mono(s: &KernelMonoSuite, ov: Overrides, out: Option<&Path>) -> Result<Vec<Check>> {
    let window = RatioWindow::new(s.half_width, s.h, s.radius);
    let unit = CoefficientField::constant(1.0);
    if ov.tau.is_some() || ov.sigma.is_some() {
        let tau = ov.tau.unwrap_or(s.positive.tau);
        let sigma = ov.sigma.unwrap_or(s.positive.sigma);
        let r = check_prop61(&unit, tau, sigma, &window)?;
        if let Some(dir) = out {
            report::write_ratio_profile(&dir.join("ratio.csv"), &r)?;
        }
        return Ok(vec![check(
            9,
            "shift ratio",
            format!("tau {tau} sigma {sigma}: min ratio {:.6} (constant-coefficient value {:.6})", r.min_ratio, constant_shift_ratio(tau, 1)),
            r.pass,
        )]);
    }
    let pos = check_prop61(&unit, s.positive.tau, s.positive.sigma, &window)?;
    let exact = constant_shift_ratio(s.positive.tau, 1);
    let neg = check_prop61(&unit, s.negative.tau, s.negative.sigma, &window)?;
    let predicted_neg = constant_shift_ratio(s.negative.tau, 1) > s.negative.sigma;
    if let Some(dir) = out {
        report::write_ratio_profile(&dir.join("ratio.csv"), &pos)?;
    }
    let a = &s.amplitude_scan;
    let scan = scan_gradient_amplitude(&a.amplitudes, a.scale, a.tau, a.sigma, &RatioWindow::new(s.half_width, s.h, s.radius))?;
    let required_pass = scan.results.iter().any(|r| r.0 == a.required && r.2);
    Ok(vec![
        check(
            9,
            "shift ratio, constant coefficient",
            format!(
                "tau {} sigma {}: min ratio {:.6} at x = {:.3} (exact {exact:.6}); control tau {} sigma {}: min {:.6}, pass = {} (predicted {predicted_neg})",
                s.positive.tau, s.positive.sigma, pos.min_ratio, pos.argmin[0], s.negative.tau, s.negative.sigma, neg.min_ratio, neg.pass
            ),
            pos.pass && (pos.min_ratio - exact).abs() <= s.ratio_tolerance && pos.argmin[0].abs() <= s.h && neg.pass == predicted_neg,
        ),
        check(
            10,
            "shift ratio, variable coefficient",
            format!(
                "largest passing amplitude {:?}; {}",
                scan.largest_passing,
                scan.results.iter().map(|r| format!("{}: {:.4}", r.0, r.1)).collect::<Vec<_>>().join(", ")
            ),
            required_pass,
        ),
    ])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TumorSuite {
    pub betas: Vec<f64>,
    pub event_time: f64,
    pub residual_tolerance: f64,
    pub eps: f64,
    pub implication_beta: f64,
    pub implication_sigma: f64,
    pub comb: f64,
    pub following: usize,
    pub t_final: f64,
    pub problem: ProblemSection,
    pub solver: SolverSection,
}

fn problem_of(section: &ProblemSection) -> Result<Problem> {
    Problem::new(section.dimension, section.half_width, section.coefficient.clone(), section.reaction.clone(), section.initial.clone())
}

pub fn tumor_jump(s: &TumorSuite, out: Option<&Path>) -> Result<Vec<Check>> {
    let p = problem_of(&s.problem)?;
    let base = SolverConfig::new(s.solver.h, s.event_time);
    let state = solve(&p, &base)?.last().u.clone();
    let rhs = discrete_rhs(&p, &state)?;
    let mut worst: f64 = 0.0;
    for &beta in &s.betas {
        let r = jump_identity_residual(&state, &rhs, beta, &p)?;
        worst = worst.max(r.values().iter().map(|v| v.abs()).fold(0.0, f64::max));
    }
    let mut checks = vec![check(
        11,
        "treatment jump identity",
        format!("max |residual| {worst:.3e} over betas {:?} at t = {} (max {:e})", s.betas, s.event_time, s.residual_tolerance),
        worst <= s.residual_tolerance,
    )];
    let cfg = SolverConfig::new(s.solver.h, s.t_final).with_comb(s.comb);
    let untreated = solve(&p, &cfg)?;
    let t_eps = theorem1_report(&untreated, &[s.eps], None)?.t_eps(s.eps);
    let sched = TreatmentSchedule::new(vec![TreatmentEvent { t: s.event_time, beta: s.implication_beta }], s.implication_sigma)?;
    let run = run_protocol(&p, &sched, &cfg)?;
    let e = &run.events[0];
    let nondecreasing = run.size_nondecreasing_after(0, s.following);
    if let Some(dir) = out {
        report::write_protocol(&dir.join("protocol.csv"), &run)?;
    }
    checks.push(check(
        12,
        "observed size after treatment",
        format!(
            "T_eps = {t_eps:?}, event at {}, min boundary rhs {:.3e}, grazing {}, S nondecreasing on next {}: {nondecreasing:?}",
            s.event_time, e.boundary_rhs_min, e.grazing, s.following
        ),
        t_eps.is_some_and(|t| t < s.event_time) && e.boundary_rhs_min > 0.0 && !e.grazing && nondecreasing == Some(true),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_configs_parse() {
        let _: MonotonicitySuite = parse(pinned_config("theorem1").unwrap()).unwrap();
        let _: PositivitySuite = parse(pinned_config("theorem2").unwrap()).unwrap();
        let _: GreenSuite = parse(pinned_config("green").unwrap()).unwrap();
        let _: KernelMonoSuite = parse(pinned_config("kernel-mono").unwrap()).unwrap();
        let _: AronsonSuite = parse(pinned_config("aronson").unwrap()).unwrap();
        let _: TumorSuite = parse(pinned_config("tumor-jump").unwrap()).unwrap();
        let _: Prop91Suite = parse(pinned_config("prop91-scan").unwrap()).unwrap();
        assert!(pinned_config("nope").is_err());
    }
}
