//! Time stepping for `u_t = div(a grad u) + f(x, u)` on a truncated box with Dirichlet data.
//!
//! The spatial operator is the standard conservative five-point (three-point in 1D) stencil with
//! face coefficients `a((x_i + x_{i+1}) / 2)`. Under the step restriction
//! `dt <= h^2 / (2 dim sup a)` the explicit update is monotone, so the discrete flow obeys the
//! maximum and comparison principles; this is checked after every step rather than enforced by
//! clipping.
//!
//! Solution runs also evolve the complement `w = 1 - u` with the same scheme. Both fields are
//! exact images of each other in exact arithmetic; in floating point `u` keeps relative
//! precision where it is small and `w` where `u` is close to one. The stored right-hand side
//! takes whichever is accurate at each node, which is what makes sign checks of `u_t` behind
//! the front meaningful.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Side};
use crate::model::{make_initial, CoefficientField, LocalReaction, Problem, Reaction};

/// Fraction of the explicit stability bound used by `dt = auto`.
pub const AUTO_DT_FRACTION: f64 = 0.9;
/// Slack on the maximum principle `0 <= u <= 1`.
pub const RANGE_SLACK: f64 = 1e-12;
/// Default tolerance on the unit mass of numerical fundamental solutions.
pub const KERNEL_MASS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStep {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ExplicitEuler,
    /// Backward Euler for diffusion (tridiagonal solve), forward Euler for the reaction. 1D only.
    ImexDiffusionImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    DirichletZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub h: f64,
    pub dt: TimeStep,
    pub scheme: Scheme,
    pub t_final: f64,
    /// Times at which snapshots are stored; `t_final` is appended if missing.
    pub snapshot_times: Vec<f64>,
    pub boundary: Boundary,
    /// Warn when `u` next to the boundary exceeds this.
    pub boundary_leak_tolerance: f64,
    /// Abort when `u` next to the boundary exceeds this.
    pub boundary_leak_abort: f64,
}

impl SolverConfig {
    pub fn new(h: f64, t_final: f64) -> Self {
        Self {
            h,
            dt: TimeStep::Auto,
            scheme: Scheme::ExplicitEuler,
            t_final,
            snapshot_times: vec![t_final],
            boundary: Boundary::DirichletZero,
            boundary_leak_tolerance: 1e-8,
            boundary_leak_abort: 1e-3,
        }
    }

    /// Snapshots on the uniform comb `0, step, 2 step, ..., t_final`.
    pub fn with_comb(mut self, step: f64) -> Self {
        self.snapshot_times = comb(0.0, self.t_final, step);
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = TimeStep::Fixed(dt);
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_snapshot_times(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    fn normalized_times(&self) -> Result<Vec<f64>> {
        let mut times = self.snapshot_times.clone();
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0 && *t <= self.t_final * (1.0 + 1e-12))) {
            return Err(Error::InvalidInput(format!(
                "snapshot times must lie in [0, {}]",
                self.t_final
            )));
        }
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        if times.last().map_or(true, |&t| (t - self.t_final).abs() > 1e-12 * self.t_final.max(1.0)) {
            times.push(self.t_final);
        }
        Ok(times)
    }
}

/// `start, start + step, ...` up to and including `end` (when it lands on the comb).
pub fn comb(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

/// Explicit stability bound `h^2 / (2 dim sup a)`.
pub fn explicit_dt_limit(h: f64, dim: usize, a_max: f64) -> f64 {
    h * h / (2.0 * dim as f64 * a_max)
}

/// Spatial operator frozen on a grid.
#[derive(Clone)]
pub struct Operator {
    grid: Grid,
    /// Faces between `k` and its successor along the first axis.
    face_x: Vec<f64>,
    /// Faces between `k` and its successor along the second axis (2D only).
    face_y: Vec<f64>,
    local: Vec<LocalReaction>,
    a_max: f64,
    inv_h2: f64,
}

impl Operator {
    pub fn new(coefficient: &CoefficientField, reaction: &Reaction, grid: &Grid) -> Result<Self> {
        let n = grid.nodes();
        let h = grid.h();
        let dim = grid.dim();
        let mut face_x = vec![0.0; grid.len()];
        let mut face_y = vec![0.0; if dim == 2 { grid.len() } else { 0 }];
        let mut a_max: f64 = 0.0;
        let mut check = |a: f64| -> Result<f64> {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidInput(format!("diffusivity {a} is not positive")));
            }
            a_max = a_max.max(a);
            Ok(a)
        };
        for k in 0..grid.len() {
            let p = grid.point(k);
            match dim {
                1 => {
                    if k + 1 < n {
                        face_x[k] = check(coefficient.eval(&[p[0] + 0.5 * h]))?;
                    }
                }
                _ => {
                    let (i, j) = (k / n, k % n);
                    if i + 1 < n {
                        face_x[k] = check(coefficient.eval(&[p[0] + 0.5 * h, p[1]]))?;
                    }
                    if j + 1 < n {
                        face_y[k] = check(coefficient.eval(&[p[0], p[1] + 0.5 * h]))?;
                    }
                }
            }
        }
        let local = (0..grid.len()).map(|k| reaction.local(&grid.point(k)[..dim])).collect();
        Ok(Self { grid: grid.clone(), face_x, face_y, local, a_max, inv_h2: 1.0 / (h * h) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn explicit_dt_limit(&self) -> f64 {
        explicit_dt_limit(self.grid.h(), self.grid.dim(), self.a_max)
    }

    /// Discrete `div(a grad u)` at interior node `k`.
    #[inline]
    pub fn diffusion_at(&self, u: &[f64], k: usize) -> f64 {
        let fx = &self.face_x;
        match self.grid.dim() {
            1 => (fx[k] * (u[k + 1] - u[k]) - fx[k - 1] * (u[k] - u[k - 1])) * self.inv_h2,
            _ => {
                let n = self.grid.nodes();
                let fy = &self.face_y;
                let x_part = fx[k] * (u[k + n] - u[k]) - fx[k - n] * (u[k] - u[k - n]);
                let y_part = fy[k] * (u[k + 1] - u[k]) - fy[k - 1] * (u[k] - u[k - 1]);
                (x_part + y_part) * self.inv_h2
            }
        }
    }

    /// `div(a grad u) + f(x, u)` at interior nodes, zero on the boundary.
    pub fn rhs(&self, u: &[f64], out: &mut [f64]) {
        for k in 0..u.len() {
            out[k] = if self.grid.is_boundary(k) {
                0.0
            } else {
                self.diffusion_at(u, k) + self.local[k].eval(u[k])
            };
        }
    }

    /// `d/dt (1 - u) = div(a grad w) - f(x, 1 - w)` for the complement `w`.
    pub fn rhs_complement(&self, w: &[f64], out: &mut [f64]) {
        for k in 0..w.len() {
            out[k] = if self.grid.is_boundary(k) {
                0.0
            } else {
                self.diffusion_at(w, k) - self.local[k].eval_complement(w[k])
            };
        }
    }

    pub fn local_reaction(&self, k: usize) -> &LocalReaction {
        &self.local[k]
    }

    /// Sampled bound on `|df/du|` over `[0, 1]`.
    fn reaction_slope_bound(&self) -> f64 {
        const M: usize = 64;
        let mut bound: f64 = 0.0;
        for local in &self.local {
            let mut prev = local.eval(0.0);
            for i in 1..=M {
                let u = i as f64 / M as f64;
                let v = local.eval(u);
                bound = bound.max(((v - prev) * M as f64).abs());
                prev = v;
            }
        }
        bound
    }

    /// Solve `(I - dt L) x = b` on interior nodes of a 1D grid, with boundary values already in
    /// `x[0]` and `x[n-1]`.
    fn implicit_diffusion_1d(&self, dt: f64, b: &[f64], x: &mut [f64], scratch: &mut Vec<f64>) {
        let n = self.grid.nodes();
        let m = n - 2;
        let r = dt * self.inv_h2;
        let f = &self.face_x;
        scratch.clear();
        scratch.resize(2 * m, 0.0);
        let (c_prime, d_prime) = scratch.split_at_mut(m);
        // Thomas algorithm on rows i = 1..n-2.
        for row in 0..m {
            let i = row + 1;
            let lower = -r * f[i - 1];
            let upper = -r * f[i];
            let diag = 1.0 + r * (f[i - 1] + f[i]);
            let mut rhs = b[i];
            if i == 1 {
                rhs += r * f[0] * x[0];
            }
            if i == n - 2 {
                rhs += r * f[n - 2] * x[n - 1];
            }
            if row == 0 {
                c_prime[row] = upper / diag;
                d_prime[row] = rhs / diag;
            } else {
                let denom = diag - lower * c_prime[row - 1];
                c_prime[row] = upper / denom;
                d_prime[row] = (rhs - lower * d_prime[row - 1]) / denom;
            }
        }
        x[n - 2] = d_prime[m - 1];
        for row in (0..m - 1).rev() {
            x[row + 1] = d_prime[row] - c_prime[row] * x[row + 2];
        }
    }
}

/// Admissible range of an evolved field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bounds {
    /// Solution states, `0 <= u <= 1`.
    Unit,
    /// Kernels, `p >= 0`.
    NonNegative,
    /// Only finiteness is checked.
    Free,
}

type BoundaryFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Time-dependent Dirichlet data at the two ends of a 1D grid.
pub struct EndValues {
    pub left: BoundaryFn,
    pub right: BoundaryFn,
}

/// Stored state at one time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub u: GridFunction,
    /// Discrete right-hand side at this state; the time derivative of the semi-discrete system.
    pub rhs: Vec<f64>,
    /// Accurately tracked `1 - u`, when available.
    pub complement: Option<Vec<f64>>,
}

impl Snapshot {
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.u.values()
    }

    /// `1 - u` at node `k`.
    pub fn complement_at(&self, k: usize) -> f64 {
        match &self.complement {
            Some(w) => w[k],
            None => 1.0 - self.u.values()[k],
        }
    }

    pub fn rhs_field(&self) -> GridFunction {
        GridFunction::new(self.grid().clone(), self.rhs.clone()).expect("rhs matches grid")
    }
}

/// A running simulation that can be advanced, inspected and modified between steps.
pub struct Simulation {
    op: Operator,
    scheme: Scheme,
    dt: f64,
    t: f64,
    u: Vec<f64>,
    w: Option<Vec<f64>>,
    bounds: Bounds,
    ends: Option<EndValues>,
    work: Vec<f64>,
    scratch: Vec<f64>,
    steps: u64,
}

impl Simulation {
    /// Start a solution run of `p` from its initial condition.
    pub fn new(p: &Problem, cfg: &SolverConfig) -> Result<Self> {
        let grid = p.grid(cfg.h)?;
        let u0 = make_initial(&p.initial, &grid)?;
        let op = Operator::new(&p.coefficient, &p.reaction, &grid)?;
        Self::from_state(op, u0.into_values(), 0.0, cfg, Bounds::Unit, true)
    }

    /// Start from an explicit state. Boundary nodes are overwritten with the Dirichlet data.
    pub fn from_state(
        op: Operator,
        mut u: Vec<f64>,
        t: f64,
        cfg: &SolverConfig,
        bounds: Bounds,
        track_complement: bool,
    ) -> Result<Self> {
        let grid = op.grid().clone();
        if u.len() != grid.len() {
            return Err(Error::InvalidInput("state does not match grid".into()));
        }
        if cfg.scheme == Scheme::ImexDiffusionImplicit && grid.dim() != 1 {
            return Err(Error::InvalidInput("the IMEX scheme is implemented in one dimension only".into()));
        }
        let limit = op.explicit_dt_limit();
        let dt = match (cfg.dt, cfg.scheme) {
            (TimeStep::Fixed(dt), _) => dt,
            (TimeStep::Auto, Scheme::ExplicitEuler) => AUTO_DT_FRACTION * limit,
            (TimeStep::Auto, Scheme::ImexDiffusionImplicit) => {
                let slope = op.reaction_slope_bound();
                let reaction_limit = if slope > 0.0 { 1.0 / slope } else { f64::INFINITY };
                (AUTO_DT_FRACTION * reaction_limit).min(0.1).max(AUTO_DT_FRACTION * limit)
            }
        };
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
        }
        if cfg.scheme == Scheme::ExplicitEuler && dt > limit * (1.0 + 1e-12) {
            return Err(Error::Stability { dt, limit });
        }
        for k in 0..u.len() {
            if grid.is_boundary(k) {
                u[k] = 0.0;
            }
        }
        let w = track_complement.then(|| {
            u.iter()
                .enumerate()
                .map(|(k, &v)| if grid.is_boundary(k) { 1.0 } else { 1.0 - v })
                .collect()
        });
        let n = u.len();
        let sim = Self {
            op,
            scheme: cfg.scheme,
            dt,
            t,
            u,
            w,
            bounds,
            ends: None,
            work: vec![0.0; n],
            scratch: Vec::new(),
            steps: 0,
        };
        sim.check_state()?;
        Ok(sim)
    }

    /// Impose time-dependent end values (1D only).
    pub fn with_end_values(mut self, ends: EndValues) -> Result<Self> {
        if self.op.grid().dim() != 1 {
            return Err(Error::InvalidInput("end values are defined for 1D grids only".into()));
        }
        self.ends = Some(ends);
        self.apply_end_values(self.t);
        Ok(self)
    }

    fn apply_end_values(&mut self, t: f64) {
        if let Some(ends) = &self.ends {
            let last = self.u.len() - 1;
            self.u[0] = (ends.left)(t);
            self.u[last] = (ends.right)(t);
            if let Some(w) = &mut self.w {
                w[0] = 1.0 - self.u[0];
                w[last] = 1.0 - self.u[last];
            }
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn grid(&self) -> &Grid {
        self.op.grid()
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    /// Multiply the state by `factor`, keeping the complement consistent.
    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.u {
            *v *= factor;
        }
        if let Some(w) = &mut self.w {
            // 1 - factor (1 - w), formed without cancellation.
            for v in w.iter_mut() {
                *v = (1.0 - factor) + factor * *v;
            }
        }
    }

    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        let tol = 1e-12 * t_target.abs().max(1.0);
        while self.t < t_target - tol {
            let remaining = t_target - self.t;
            let dt = if remaining <= self.dt * (1.0 + 1e-9) { remaining } else { self.dt };
            self.step_by(dt)?;
            if remaining <= self.dt * (1.0 + 1e-9) {
                self.t = t_target;
            }
        }
        Ok(())
    }

    fn step_by(&mut self, dt: f64) -> Result<()> {
        let t_new = self.t + dt;
        match self.scheme {
            Scheme::ExplicitEuler => {
                self.op.rhs(&self.u, &mut self.work);
                for (v, r) in self.u.iter_mut().zip(&self.work) {
                    *v += dt * r;
                }
                if let Some(w) = &mut self.w {
                    self.op.rhs_complement(w, &mut self.work);
                    for (v, r) in w.iter_mut().zip(&self.work) {
                        *v += dt * r;
                    }
                }
            }
            Scheme::ImexDiffusionImplicit => {
                let grid = self.op.grid().clone();
                for k in 0..self.u.len() {
                    self.work[k] = if grid.is_boundary(k) { 0.0 } else { self.u[k] + dt * self.op.local[k].eval(self.u[k]) };
                }
                let b = std::mem::take(&mut self.work);
                self.op.implicit_diffusion_1d(dt, &b, &mut self.u, &mut self.scratch);
                self.work = b;
                if let Some(w) = &mut self.w {
                    for k in 0..w.len() {
                        self.work[k] = if grid.is_boundary(k) {
                            0.0
                        } else {
                            w[k] - dt * self.op.local[k].eval_complement(w[k])
                        };
                    }
                    let b = std::mem::take(&mut self.work);
                    self.op.implicit_diffusion_1d(dt, &b, w, &mut self.scratch);
                    self.work = b;
                }
            }
        }
        self.t = t_new;
        self.steps += 1;
        self.apply_end_values(t_new);
        self.check_state()
    }

    fn check_state(&self) -> Result<()> {
        for (k, &v) in self.u.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { t: self.t, node: k });
            }
            let ok = match self.bounds {
                Bounds::Unit => (-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v),
                Bounds::NonNegative => v >= -RANGE_SLACK,
                Bounds::Free => true,
            };
            if !ok {
                return Err(Error::MaximumPrinciple { t: self.t, node: k, value: v });
            }
        }
        Ok(())
    }

    /// Largest value next to the truncation boundary.
    pub fn boundary_leak(&self) -> f64 {
        let g = self.op.grid();
        (0..self.u.len())
            .filter(|&k| g.is_near_boundary(k))
            .map(|k| self.u[k].abs())
            .fold(0.0, f64::max)
    }

    pub fn snapshot(&self) -> Snapshot {
        let mut rhs = vec![0.0; self.u.len()];
        self.op.rhs(&self.u, &mut rhs);
        if let Some(w) = &self.w {
            let mut rhs_w = vec![0.0; w.len()];
            self.op.rhs_complement(w, &mut rhs_w);
            for k in 0..rhs.len() {
                if self.u[k] > 0.5 {
                    rhs[k] = -rhs_w[k];
                }
            }
        }
        Snapshot {
            t: self.t,
            u: GridFunction::new(self.op.grid().clone(), self.u.clone()).expect("state is finite"),
            rhs,
            complement: self.w.clone(),
        }
    }
}

/// A solution run: snapshots at increasing times, each with its right-hand side.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub problem: Problem,
    pub config: SolverConfig,
    pub snapshots: Vec<Snapshot>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.snapshots[0].grid()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    /// Snapshot at time `t` (to within `1e-9`).
    pub fn at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-9 * t.abs().max(1.0))
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory is never empty")
    }

    /// Copy with every time shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.snapshots {
            s.t += delta;
        }
        out
    }
}

/// Advance one step of the configured size from `state` at time `t`.
pub fn step(state: &GridFunction, t: f64, p: &Problem, cfg: &SolverConfig) -> Result<GridFunction> {
    let op = Operator::new(&p.coefficient, &p.reaction, state.grid())?;
    let mut sim = Simulation::from_state(op, state.values().to_vec(), t, cfg, Bounds::Unit, false)?;
    let dt = sim.dt;
    sim.advance_to(t + dt)?;
    Ok(sim.snapshot().u)
}

/// Solve `p` with `cfg`, storing a snapshot at each requested time.
pub fn solve(p: &Problem, cfg: &SolverConfig) -> Result<Trajectory> {
    let times = cfg.normalized_times()?;
    let mut sim = Simulation::new(p, cfg)?;
    let mut snapshots = Vec::with_capacity(times.len());
    let mut warnings = Vec::new();
    for &t in &times {
        sim.advance_to(t)?;
        let leak = sim.boundary_leak();
        if leak > cfg.boundary_leak_abort {
            return Err(Error::BoundaryLeak { t, value: leak, threshold: cfg.boundary_leak_abort });
        }
        if leak > cfg.boundary_leak_tolerance {
            let msg = format!("boundary leak {leak:e} at t = {t} exceeds {:e}", cfg.boundary_leak_tolerance);
            log::warn!("{msg}");
            warnings.push(msg);
        }
        snapshots.push(sim.snapshot());
    }
    Ok(Trajectory { problem: p.clone(), config: cfg.clone(), snapshots, warnings })
}

/// Numerical heat kernel at one time.
#[derive(Debug, Clone)]
pub struct KernelSnapshot {
    pub t: f64,
    pub p: GridFunction,
    pub mass: f64,
}

/// Numerical fundamental solution of `p_t = div(a grad p)` with `p(0) = delta_y`, the Dirac mass
/// represented by `1 / h^dim` in the cell of `y`.
pub fn fundamental_solution(
    coeff: &CoefficientField,
    t_targets: &[f64],
    y: &[f64],
    grid: &Grid,
) -> Result<Vec<KernelSnapshot>> {
    fundamental_solution_with(coeff, t_targets, y, grid, KERNEL_MASS_TOLERANCE)
}

pub fn fundamental_solution_with(
    coeff: &CoefficientField,
    t_targets: &[f64],
    y: &[f64],
    grid: &Grid,
    mass_tolerance: f64,
) -> Result<Vec<KernelSnapshot>> {
    let source = grid
        .locate(y)
        .ok_or_else(|| Error::InvalidInput(format!("source point {y:?} is not a grid node")))?;
    if grid.is_boundary(source) {
        return Err(Error::InvalidInput("source point lies on the boundary".into()));
    }
    if t_targets.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidInput("kernel times must be positive".into()));
    }
    let mut times = t_targets.to_vec();
    times.sort_by(f64::total_cmp);
    let op = Operator::new(coeff, &Reaction::None, grid)?;
    let mut p0 = vec![0.0; grid.len()];
    p0[source] = 1.0 / grid.cell_volume();
    let t_final = *times.last().unwrap_or(&0.0);
    let cfg = SolverConfig::new(grid.h(), t_final);
    let mut sim = Simulation::from_state(op, p0, 0.0, &cfg, Bounds::NonNegative, false)?;
    let mut out = Vec::with_capacity(times.len());
    for t in times {
        sim.advance_to(t)?;
        let mass = sim.values().iter().sum::<f64>() * grid.cell_volume();
        if (mass - 1.0).abs() > mass_tolerance {
            return Err(Error::MassLoss { t, mass, tolerance: mass_tolerance });
        }
        out.push(KernelSnapshot { t, p: sim.snapshot().u, mass });
    }
    Ok(out)
}

/// Solve `v_t = a v_xx + rate v` on a half-line truncated to the 1D grid of `v0`, with
/// `v = g(t)` at `x = 0` and `v = 0` at the far end.
///
/// For [`Side::Right`] the grid must start at 0; for [`Side::Left`] it must end at 0.
pub fn solve_half_line(
    diffusivity: f64,
    rate: f64,
    v0: &GridFunction,
    side: Side,
    g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    times: &[f64],
) -> Result<Vec<Snapshot>> {
    let grid = v0.grid();
    if grid.dim() != 1 {
        return Err(Error::InvalidInput("half-line problems are one-dimensional".into()));
    }
    let anchor = match side {
        Side::Right => grid.origin()[0],
        Side::Left => grid.upper(0),
    };
    if anchor.abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("half-line grid must end at x = 0, found {anchor}")));
    }
    let op = Operator::new(&CoefficientField::constant(diffusivity), &Reaction::Linear { rate }, grid)?;
    let t_final = times.iter().copied().fold(0.0, f64::max);
    let cfg = SolverConfig::new(grid.h(), t_final);
    let g: BoundaryFn = Box::new(g);
    let zero: BoundaryFn = Box::new(|_| 0.0);
    let ends = match side {
        Side::Right => EndValues { left: g, right: zero },
        Side::Left => EndValues { left: zero, right: g },
    };
    let mut sim = Simulation::from_state(op, v0.values().to_vec(), 0.0, &cfg, Bounds::Free, false)?
        .with_end_values(ends)?;
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(sorted.len());
    for t in sorted {
        sim.advance_to(t)?;
        out.push(sim.snapshot());
    }
    Ok(out)
}
