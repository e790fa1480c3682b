//! Closed-form kernels and the kernel inequalities checked against numerical heat kernels:
//! the free Gaussian, the reflected half-line Green function with linear growth and its time
//! derivative, two-sided Gaussian sandwich fitting, and the one-unit-shift ratio test
//! `p(tau + 1, x; 0) >= sigma p(tau, x; 0)`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::model::CoefficientField;
use crate::solver::{fundamental_solution, KernelSnapshot};

/// Kernel values below this are excluded from ratio and sandwich checks.
pub const DEFAULT_KERNEL_FLOOR: f64 = 1e-12;
/// Bisection resolution of the sandwich constant.
pub const K_RESOLUTION: f64 = 1e-3;
const K_MAX: f64 = 1e6;

/// `exp(-|x|^2 / (4 D t)) / (4 pi D t)^(N/2)`, with `N = x.len()`.
pub fn gaussian_kernel(diffusivity: f64, t: f64, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let dt = diffusivity * t;
    (-r2 / (4.0 * dt)).exp() / (4.0 * PI * dt).powf(x.len() as f64 / 2.0)
}

/// `phi(s) = s exp(-s)`, maximal at `s = 1`.
pub fn phi(s: f64) -> f64 {
    s * (-s).exp()
}

/// Parameters of `v_t = a v_xx + rate v` on a half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfLineParams {
    pub diffusivity: f64,
    pub rate: f64,
}

impl HalfLineParams {
    pub fn new(diffusivity: f64, rate: f64) -> Result<Self> {
        if !(diffusivity > 0.0 && diffusivity.is_finite()) || !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "half-line parameters need a > 0 and rate >= 0, got a = {diffusivity}, rate = {rate}"
            )));
        }
        Ok(Self { diffusivity, rate })
    }

    /// `sqrt(8 a t)`, the distance from the boundary beyond which the sign result applies.
    pub fn region_start(&self, t: f64) -> f64 {
        (8.0 * self.diffusivity * t).sqrt()
    }
}

/// Dirichlet Green function of the half-line by reflection:
/// `e^(rate t) / sqrt(4 pi a t) * [exp(-(x-y)^2/(4at)) - exp(-(x+y)^2/(4at))]`.
///
/// Evaluated as `exp(-(x-y)^2/(4at)) * (1 - exp(-xy/(at)))` so that it is exactly zero at the
/// boundary, exactly symmetric and free of cancellation for small `x y`.
pub fn half_line_green(pp: &HalfLineParams, t: f64, x: f64, y: f64) -> f64 {
    let four_at = 4.0 * pp.diffusivity * t;
    let near = (x - y) * (x - y) / four_at;
    let gap = x * y / (pp.diffusivity * t);
    (pp.rate * t).exp() / (PI * four_at).sqrt() * (-near).exp() * -(-gap).exp_m1()
}

/// Time derivative of [`half_line_green`]:
/// `e^(rate t) / sqrt(4 pi a t^3) * sum over images of ±exp(-q) (rate t - 1/2 + q)` with
/// `q = (x ∓ y)^2 / (4at)`.
pub fn half_line_green_dt(pp: &HalfLineParams, t: f64, x: f64, y: f64) -> f64 {
    let four_at = 4.0 * pp.diffusivity * t;
    let q_near = (x - y) * (x - y) / four_at;
    let gap = x * y / (pp.diffusivity * t);
    let shift = pp.rate * t - 0.5;
    let bracket = (shift + q_near) * -(-gap).exp_m1() - gap * (-gap).exp();
    (pp.rate * t).exp() / (PI * four_at * t * t).sqrt() * (-q_near).exp() * bracket
}

/// `t0 = 1 / (2 rate) + e / ((e - 1) rate)`.
pub fn t0_threshold(pp: &HalfLineParams) -> Result<f64> {
    if !(pp.rate > 0.0) {
        return Err(Error::InvalidInput("t0 requires a positive rate".into()));
    }
    Ok(1.0 / (2.0 * pp.rate) + E / ((E - 1.0) * pp.rate))
}

fn check_half_line_grid(v0: &GridFunction) -> Result<&Grid> {
    let g = v0.grid();
    if g.dim() != 1 || g.origin()[0].abs() > 1e-12 {
        return Err(Error::InvalidInput("half-line data must live on a 1D grid starting at x = 0".into()));
    }
    if v0.values().iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidInput("half-line initial data must be non-negative".into()));
    }
    let n = v0.values().len();
    if v0.values()[n - 3..].iter().any(|&v| v != 0.0) {
        log::warn!("half-line initial data touches the truncation edge at x = {}", g.upper(0));
    }
    Ok(g)
}

fn trapezoid_weights(n: usize, h: f64) -> impl Fn(usize) -> f64 {
    move |j| if j == 0 || j == n - 1 { 0.5 * h } else { h }
}

fn quadrature_with(
    v0: &GridFunction,
    kernel: impl Fn(f64, f64) -> f64,
) -> Result<GridFunction> {
    let g = check_half_line_grid(v0)?.clone();
    let n = g.nodes();
    let weight = trapezoid_weights(n, g.h());
    let support: Vec<(f64, f64)> = v0
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| (g.coord(0, j), weight(j) * v))
        .collect();
    let values = (0..n)
        .map(|i| {
            let x = g.coord(0, i);
            support.iter().map(|&(y, wv)| kernel(x, y) * wv).sum()
        })
        .collect();
    GridFunction::new(g, values)
}

/// Trapezoid quadrature of `w(t, x) = int_0^inf G(t, x, y) v0(y) dy` on the grid of `v0`.
pub fn halfline_quadrature(pp: &HalfLineParams, v0: &GridFunction, t: f64) -> Result<GridFunction> {
    quadrature_with(v0, |x, y| half_line_green(pp, t, x, y))
}

/// Trapezoid quadrature of `w_t(t, x) = int_0^inf G_t(t, x, y) v0(y) dy`.
pub fn halfline_quadrature_dt(pp: &HalfLineParams, v0: &GridFunction, t: f64) -> Result<GridFunction> {
    quadrature_with(v0, |x, y| half_line_green_dt(pp, t, x, y))
}

/// One sampled point of the `G_t > 0` scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenSample {
    pub a: f64,
    pub lambda: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub g: f64,
    pub g_t: f64,
}

/// Sampling layout of the `G_t > 0` scan over the region `t >= t0`, `x >= sqrt(8at)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenScanSpec {
    pub diffusivities: Vec<f64>,
    pub rates: Vec<f64>,
    /// Points in `[t0, t_factor * t0]`.
    pub n_t: usize,
    pub t_factor: f64,
    /// Points in `[sqrt(8at), sqrt(8at) + x_span]`.
    pub n_x: usize,
    pub x_span: f64,
    /// Points `y_max k / n_y`, `k = 1..=n_y`.
    pub n_y: usize,
    pub y_max: f64,
}

impl Default for GreenScanSpec {
    fn default() -> Self {
        Self {
            diffusivities: vec![0.5, 1.0, 2.0],
            rates: vec![0.5, 1.0, 2.0],
            n_t: 20,
            t_factor: 5.0,
            n_x: 50,
            x_span: 10.0,
            n_y: 100,
            y_max: 20.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenScanReport {
    pub points: usize,
    pub violations: Vec<GreenSample>,
    /// Sample with the smallest `G_t`.
    pub weakest: Option<GreenSample>,
}

/// Visit every scan sample in a fixed order.
pub fn for_each_green_sample(spec: &GreenScanSpec, mut visit: impl FnMut(GreenSample)) -> Result<()> {
    let span = |n: usize, lo: f64, hi: f64, k: usize| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    };
    for &a in &spec.diffusivities {
        for &lambda in &spec.rates {
            let pp = HalfLineParams::new(a, lambda)?;
            let t0 = t0_threshold(&pp)?;
            for it in 0..spec.n_t {
                let t = span(spec.n_t, t0, spec.t_factor * t0, it);
                let x0 = pp.region_start(t);
                for ix in 0..spec.n_x {
                    let x = span(spec.n_x, x0, x0 + spec.x_span, ix);
                    for iy in 1..=spec.n_y {
                        let y = spec.y_max * iy as f64 / spec.n_y as f64;
                        visit(GreenSample {
                            a,
                            lambda,
                            t,
                            x,
                            y,
                            g: half_line_green(&pp, t, x, y),
                            g_t: half_line_green_dt(&pp, t, x, y),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Count samples with `G_t <= 0` in the region where the sign result guarantees `G_t > 0`.
pub fn green_dt_scan(spec: &GreenScanSpec) -> Result<GreenScanReport> {
    let mut report = GreenScanReport { points: 0, violations: Vec::new(), weakest: None };
    for_each_green_sample(spec, |s| {
        report.points += 1;
        if !(s.g_t > 0.0) {
            report.violations.push(s);
        }
        if report.weakest.map_or(true, |w| s.g_t < w.g_t) {
            report.weakest = Some(s);
        }
    })?;
    Ok(report)
}

/// Which side of the Gaussian sandwich a point constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    Lower,
    Upper,
}

/// Form of the Gaussian sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SandwichForm {
    /// `exp(-K r^2 / t) / (K t^(N/2)) <= p <= K exp(-r^2 / (K t)) / t^(N/2)`.
    Literal,
    /// `exp(-K r^2 / (4t)) / (K (4 pi t)^(N/2)) <= p <= K exp(-r^2 / (4 K t)) / (4 pi t)^(N/2)`;
    /// the exact unit-diffusivity Gaussian satisfies it with `K = 1`.
    GaussianNormalized,
}

impl SandwichForm {
    fn bounds(self, k: f64, t: f64, r2: f64, dim: usize) -> (f64, f64) {
        let half = dim as f64 / 2.0;
        match self {
            Self::Literal => {
                let scale = t.powf(half);
                ((-k * r2 / t).exp() / (k * scale), k * (-r2 / (k * t)).exp() / scale)
            }
            Self::GaussianNormalized => {
                let scale = (4.0 * PI * t).powf(half);
                (
                    (-k * r2 / (4.0 * t)).exp() / (k * scale),
                    k * (-r2 / (4.0 * k * t)).exp() / scale,
                )
            }
        }
    }
}

/// Points of numerical kernels entering a sandwich fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AronsonWindow {
    /// Only times in this list are used (all kernels when empty).
    pub times: Vec<f64>,
    /// Largest `|x - y|` included.
    pub radius: f64,
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichWitness {
    pub t: f64,
    pub x: [f64; 2],
    pub bound: Bound,
    /// `log(p / lower)` or `log(upper / p)` at the fitted constant.
    pub log_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AronsonFit {
    /// Smallest `K` (to the bisection resolution) for the literal form.
    pub k: f64,
    /// Same for the Gaussian-normalised form.
    pub k_normalized: f64,
    pub witness: SandwichWitness,
    pub witness_normalized: SandwichWitness,
    pub points: usize,
    pub window: AronsonWindow,
}

struct SandwichPoint {
    t: f64,
    x: [f64; 2],
    r2: f64,
    p: f64,
    dim: usize,
}

fn sandwich_points(kernels: &[KernelSnapshot], y: &[f64], window: &AronsonWindow) -> Vec<SandwichPoint> {
    let mut out = Vec::new();
    for ks in kernels {
        if !window.times.is_empty() && !window.times.iter().any(|&t| (t - ks.t).abs() <= 1e-9 * t.max(1.0)) {
            continue;
        }
        let g = ks.p.grid();
        let dim = g.dim();
        for (k, &p) in ks.p.values().iter().enumerate() {
            let x = g.point(k);
            let r2: f64 = (0..dim).map(|a| (x[a] - y[a]) * (x[a] - y[a])).sum();
            if r2 <= window.radius * window.radius && p >= window.floor {
                out.push(SandwichPoint { t: ks.t, x, r2, p, dim });
            }
        }
    }
    out
}

fn holds(points: &[SandwichPoint], form: SandwichForm, k: f64) -> bool {
    points.iter().all(|pt| {
        let (lo, hi) = form.bounds(k, pt.t, pt.r2, pt.dim);
        lo <= pt.p && pt.p <= hi
    })
}

fn tightest(points: &[SandwichPoint], form: SandwichForm, k: f64) -> SandwichWitness {
    let mut best = SandwichWitness { t: 0.0, x: [0.0; 2], bound: Bound::Lower, log_slack: f64::INFINITY };
    for pt in points {
        let (lo, hi) = form.bounds(k, pt.t, pt.r2, pt.dim);
        for (bound, slack) in [(Bound::Lower, (pt.p / lo).ln()), (Bound::Upper, (hi / pt.p).ln())] {
            if slack < best.log_slack {
                best = SandwichWitness { t: pt.t, x: pt.x, bound, log_slack: slack };
            }
        }
    }
    best
}

fn smallest_k(points: &[SandwichPoint], form: SandwichForm) -> Result<f64> {
    if holds(points, form, 1.0) {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !holds(points, form, hi) {
        lo = hi;
        hi *= 2.0;
        if hi > K_MAX {
            return Err(Error::NoFiniteConstant { k_max: K_MAX });
        }
    }
    while hi - lo > K_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if holds(points, form, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `K >= 1` for which both Gaussian bounds hold at every window point of the numerical
/// kernels `p(t, .; y)`.
pub fn fit_aronson_k(kernels: &[KernelSnapshot], y: &[f64], window: &AronsonWindow) -> Result<AronsonFit> {
    let points = sandwich_points(kernels, y, window);
    if points.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let k = smallest_k(&points, SandwichForm::Literal)?;
    let k_normalized = smallest_k(&points, SandwichForm::GaussianNormalized)?;
    Ok(AronsonFit {
        k,
        k_normalized,
        witness: tightest(&points, SandwichForm::Literal, k),
        witness_normalized: tightest(&points, SandwichForm::GaussianNormalized, k_normalized),
        points: points.len(),
        window: window.clone(),
    })
}

/// `(tau / (tau + 1))^(N/2)`: the minimum over `x` of `p(tau + 1, x; 0) / p(tau, x; 0)` for
/// constant diffusion, attained at `x = 0`.
pub fn constant_shift_ratio(tau: f64, dim: usize) -> f64 {
    (tau / (tau + 1.0)).powf(dim as f64 / 2.0)
}

/// Infimum of the `tau` for which the constant-coefficient ratio exceeds `sigma`.
pub fn smallest_passing_tau(sigma: f64, dim: usize) -> f64 {
    let s = sigma.powf(2.0 / dim as f64);
    s / (1.0 - s)
}

/// Domain and filtering of the shift-ratio check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioWindow {
    pub dim: usize,
    /// Half-width of the computational box.
    pub half_width: f64,
    pub h: f64,
    /// Largest `|x|` included in the minimum.
    pub radius: f64,
    pub floor: f64,
}

impl RatioWindow {
    pub fn new(half_width: f64, h: f64, radius: f64) -> Self {
        Self { dim: 1, half_width, h, radius, floor: DEFAULT_KERNEL_FLOOR }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftRatioReport {
    pub tau: f64,
    pub sigma: f64,
    pub min_ratio: f64,
    pub argmin: [f64; 2],
    pub pass: bool,
    /// `(x, ratio)` along the first axis through the origin.
    pub profile: Vec<(f64, f64)>,
}

/// Minimum over the window of `p(tau + 1, x; 0) / p(tau, x; 0)` from two numerical kernels.
pub fn shift_ratio(
    early: &KernelSnapshot,
    late: &KernelSnapshot,
    sigma: f64,
    window: &RatioWindow,
) -> Result<ShiftRatioReport> {
    let g = early.p.grid();
    let dim = g.dim();
    let mut min_ratio = f64::INFINITY;
    let mut argmin = [0.0; 2];
    let mut profile = Vec::new();
    for k in 0..g.len() {
        let x = g.point(k);
        let r2: f64 = x[..dim].iter().map(|v| v * v).sum();
        let (pe, pl) = (early.p.values()[k], late.p.values()[k]);
        if r2 > window.radius * window.radius || pe < window.floor || pl < window.floor {
            continue;
        }
        let ratio = pl / pe;
        if ratio < min_ratio {
            min_ratio = ratio;
            argmin = x;
        }
        if dim == 1 || x[1].abs() < 0.5 * g.h() {
            profile.push((x[0], ratio));
        }
    }
    if !min_ratio.is_finite() {
        return Err(Error::EmptyWindow);
    }
    Ok(ShiftRatioReport { tau: early.t, sigma, min_ratio, argmin, pass: min_ratio >= sigma, profile })
}

/// Compute the kernels of `coeff` from the origin at `tau` and `tau + 1` and compare their
/// ratio with `sigma`.
pub fn check_prop61(coeff: &CoefficientField, tau: f64, sigma: f64, window: &RatioWindow) -> Result<ShiftRatioReport> {
    if !(sigma > 0.0 && sigma < 1.0) || !(tau > 0.0) {
        return Err(Error::InvalidInput(format!("need tau > 0 and sigma in (0, 1), got {tau}, {sigma}")));
    }
    let grid = Grid::centered(window.dim, window.half_width, window.h)?;
    let origin = vec![0.0; window.dim];
    let ks = fundamental_solution(coeff, &[tau, tau + 1.0], &origin, &grid)?;
    shift_ratio(&ks[0], &ks[1], sigma, window)
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeScan {
    /// `(amplitude, min_ratio, pass)`.
    pub results: Vec<(f64, f64, bool)>,
    /// Largest amplitude in the passing set, if any.
    pub largest_passing: Option<f64>,
}

/// Run the shift-ratio check for `a(x) = 1 + amplitude * sin(x / scale)` over `amplitudes`.
pub fn scan_gradient_amplitude(
    amplitudes: &[f64],
    scale: f64,
    tau: f64,
    sigma: f64,
    window: &RatioWindow,
) -> Result<AmplitudeScan> {
    use rayon::prelude::*;
    let results: Vec<(f64, f64, bool)> = amplitudes
        .par_iter()
        .map(|&amp| {
            let r = check_prop61(&CoefficientField::sinusoidal(1.0, amp, scale), tau, sigma, window)?;
            Ok((amp, r.min_ratio, r.pass))
        })
        .collect::<Result<_>>()?;
    let largest_passing = results
        .iter()
        .filter(|r| r.2)
        .map(|r| r.0)
        .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))));
    Ok(AmplitudeScan { results, largest_passing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(a: f64, rate: f64) -> HalfLineParams {
        HalfLineParams::new(a, rate).unwrap()
    }

    #[test]
    fn gaussian_values() {
        assert!((gaussian_kernel(1.0, 1.0, &[0.0]) - 0.282_094_791_8).abs() < 1e-10);
        assert!((gaussian_kernel(1.0, 2.0, &[0.0, 0.0]) - 1.0 / (8.0 * PI)).abs() < 1e-15);
        let a = gaussian_kernel(2.5, 0.7, &[1.3]);
        let b = gaussian_kernel(1.0, 2.5 * 0.7, &[1.3]);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn green_closed_form_value() {
        let g = half_line_green(&pp(1.0, 0.0), 1.0, 1.0, 1.0);
        let expected = (1.0 - (-1.0f64).exp()) / (4.0 * PI).sqrt();
        assert!((g - expected).abs() < 1e-15);
        assert!((g - 0.178_317_917_418_729_5).abs() < 1e-15);
    }

    #[test]
    fn green_matches_image_formula() {
        let p = pp(0.7, 1.3);
        for &(t, x, y) in &[(0.5, 1.0, 2.0), (2.0, 3.0, 0.4), (1.0, 0.1, 0.2)] {
            let four_at = 4.0 * p.diffusivity * t;
            let direct = (p.rate * t).exp() / (PI * four_at).sqrt()
                * ((-(x - y) * (x - y) / four_at).exp() - (-(x + y) * (x + y) / four_at).exp());
            let g = half_line_green(&p, t, x, y);
            assert!((g - direct).abs() <= 1e-13 * direct.abs().max(1e-300), "{g} vs {direct}");
        }
    }

    #[test]
    fn green_boundary_and_symmetry() {
        let p = pp(1.3, 0.4);
        for &t in &[0.1, 1.0, 7.0] {
            for &y in &[0.0, 0.5, 3.0] {
                assert_eq!(half_line_green(&p, t, 0.0, y), 0.0);
                for &x in &[0.2, 1.0, 4.0] {
                    assert_eq!(half_line_green(&p, t, x, y), half_line_green(&p, t, y, x));
                }
            }
        }
    }

    #[test]
    fn green_dt_matches_finite_difference() {
        let p = pp(1.0, 1.0);
        let (t, x, y, d) = (2.0, 3.0, 1.0, 1e-6);
        let fd = (half_line_green(&p, t + d, x, y) - half_line_green(&p, t - d, x, y)) / (2.0 * d);
        let exact = half_line_green_dt(&p, t, x, y);
        assert!(((fd - exact) / exact).abs() < 1e-6, "{fd} vs {exact}");
    }

    #[test]
    fn green_dt_positive_in_region() {
        let p = pp(1.0, 1.0);
        let t0 = t0_threshold(&p).unwrap();
        assert!(3.0 >= t0 && 5.0 >= p.region_start(3.0));
        assert!(half_line_green_dt(&p, 3.0, 5.0, 1.0) > 0.0);
    }

    #[test]
    fn phi_peaks_at_one() {
        assert!((phi(1.0) - (-1.0f64).exp()).abs() < 1e-16);
        for &s in &[0.5, 0.99, 1.01, 2.0] {
            assert!(phi(s) < phi(1.0));
        }
    }

    #[test]
    fn t0_values() {
        let t1 = t0_threshold(&pp(1.0, 1.0)).unwrap();
        assert!((t1 - 2.081_976_7).abs() < 1e-6);
        let t2 = t0_threshold(&pp(1.0, 2.0)).unwrap();
        assert!((t2 - t1 / 2.0).abs() < 1e-15);
        assert!(t0_threshold(&pp(1.0, 0.0)).is_err());
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let t = t0_threshold(&pp(1.0, k as f64)).unwrap();
            assert!(t < prev && t > 0.0);
            prev = t;
        }
    }

    #[test]
    fn quadrature_zero_data_and_growth_factor() {
        let g = Grid::interval(0.0, 200, 0.05).unwrap();
        let zero = GridFunction::zeros(g.clone());
        assert!(halfline_quadrature(&pp(1.0, 1.0), &zero, 0.5).unwrap().values().iter().all(|&v| v == 0.0));
        let v0 = GridFunction::from_fn(g, |x| if (1.0..=2.0).contains(&x[0]) { 1.0 } else { 0.0 });
        let with = halfline_quadrature(&pp(1.0, 1.0), &v0, 0.5).unwrap();
        let without = halfline_quadrature(&pp(1.0, 0.0), &v0, 0.5).unwrap();
        let factor = 0.5f64.exp();
        for (a, b) in with.values().iter().zip(without.values()) {
            assert!((a - factor * b).abs() <= 1e-14 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn smallest_tau_for_sigma() {
        let tau = smallest_passing_tau(0.9, 1);
        assert!((tau - 0.81 / 0.19).abs() < 1e-12);
        assert!((tau - 4.263_157_894_7).abs() < 1e-9);
        assert!((constant_shift_ratio(tau, 1) - 0.9).abs() < 1e-12);
        assert!((constant_shift_ratio(4.0, 1) - 0.8f64.sqrt()).abs() < 1e-15);
    }

    fn exact_kernels(times: &[f64], grid: &Grid) -> Vec<KernelSnapshot> {
        times
            .iter()
            .map(|&t| KernelSnapshot {
                t,
                p: GridFunction::from_fn(grid.clone(), |x| gaussian_kernel(1.0, t, x)),
                mass: 1.0,
            })
            .collect()
    }

    /// Brute-force oracle: scan K upward on a fine lattice.
    fn brute_force_k(kernels: &[KernelSnapshot], window: &AronsonWindow, form: SandwichForm) -> f64 {
        let pts = sandwich_points(kernels, &[0.0], window);
        let mut k = 1.0;
        while !pts.iter().all(|pt| {
            let (lo, hi) = form.bounds(k, pt.t, pt.r2, pt.dim);
            lo <= pt.p && pt.p <= hi
        }) {
            k += 1e-4;
        }
        k
    }

    #[test]
    fn sandwich_of_exact_gaussian() {
        let grid = Grid::centered(1, 12.0, 0.1).unwrap();
        let kernels = exact_kernels(&[0.5, 1.0, 2.0, 4.0], &grid);
        let window = AronsonWindow { times: vec![], radius: 10.0, floor: DEFAULT_KERNEL_FLOOR };
        let fit = fit_aronson_k(&kernels, &[0.0], &window).unwrap();
        assert!(fit.k_normalized - 1.0 < 1e-12, "normalized K = {}", fit.k_normalized);
        let oracle = brute_force_k(&kernels, &window, SandwichForm::Literal);
        assert!(fit.k >= oracle - 1e-4 && fit.k - oracle <= K_RESOLUTION + 1e-4, "{} vs {oracle}", fit.k);
        assert!(fit.k > 1.0);
    }

    #[test]
    fn shrinking_window_never_increases_k() {
        let grid = Grid::centered(1, 12.0, 0.1).unwrap();
        let kernels = exact_kernels(&[0.5, 1.0, 2.0, 4.0], &grid);
        let mut prev = f64::INFINITY;
        for radius in [10.0, 7.0, 4.0, 2.0, 0.5] {
            let window = AronsonWindow { times: vec![], radius, floor: DEFAULT_KERNEL_FLOOR };
            let fit = fit_aronson_k(&kernels, &[0.0], &window).unwrap();
            assert!(fit.k <= prev);
            prev = fit.k;
        }
    }

    #[test]
    fn empty_window_rejected() {
        let grid = Grid::centered(1, 12.0, 0.1).unwrap();
        let kernels = exact_kernels(&[1.0], &grid);
        let window = AronsonWindow { times: vec![], radius: 10.0, floor: 1e3 };
        assert!(matches!(fit_aronson_k(&kernels, &[0.0], &window), Err(Error::EmptyWindow)));
    }

    #[test]
    fn tiny_sigma_always_passes() {
        let w = RatioWindow::new(30.0, 0.1, 10.0);
        let r = check_prop61(&CoefficientField::constant(1.0), 0.2, 1e-9, &w).unwrap();
        assert!(r.pass);
    }
}
