//! Problem definitions for `u_t = div(a(x) grad u) + f(x, u)` and sampling-based checks of the
//! structural hypotheses the monotonicity results rely on.
//!
//! Diffusion is scalar (`A(x) = a(x) I`). Spatial dependence of the built-in kinds is carried by
//! the first coordinate only, so the same definitions serve one- and two-dimensional runs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// Tolerance for `f(x, 0) = f(x, 1) = 0`.
pub const ZERO_STATE_TOLERANCE: f64 = 1e-12;
/// A KPP lower bound `f(x, s) >= mu s` with `mu` below this is treated as absent.
pub const MU_FLOOR: f64 = 1e-6;
/// Default width of the window `[0, s0]` on which the KPP lower bound is measured.
pub const DEFAULT_S0: f64 = 0.1;

const SMALL_PROBES: [f64; 3] = [1e-9, 1e-6, 1e-3];

/// Quintic smoothstep: 0 below `-radius`, 1 above `radius`, C² in between.
pub fn smoothstep(x: f64, radius: f64) -> f64 {
    if radius <= 0.0 {
        return if x < 0.0 { 0.0 } else { 1.0 };
    }
    let z = ((x + radius) / (2.0 * radius)).clamp(0.0, 1.0);
    z * z * z * (10.0 + z * (-15.0 + 6.0 * z))
}

pub type CoefficientFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ReactionFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// User-supplied scalar diffusivity.
#[derive(Clone)]
pub struct CustomCoefficient {
    pub a: CoefficientFn,
    /// Radius beyond which `a` is constant on each side, if known.
    pub homogeneous_beyond: Option<f64>,
}

impl fmt::Debug for CustomCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomCoefficient")
            .field("homogeneous_beyond", &self.homogeneous_beyond)
            .finish_non_exhaustive()
    }
}

/// Scalar diffusivity field `a(x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientField {
    Constant {
        diffusivity: f64,
    },
    /// `base + amplitude * sin(x / scale)`.
    Sinusoidal {
        base: f64,
        amplitude: f64,
        scale: f64,
    },
    /// `minus` for `x <= -radius`, `plus` for `x >= radius`, smoothstep blend in between.
    Piecewise {
        minus: f64,
        plus: f64,
        radius: f64,
    },
    #[serde(skip)]
    Custom(CustomCoefficient),
}

impl CoefficientField {
    pub fn constant(diffusivity: f64) -> Self {
        Self::Constant { diffusivity }
    }

    pub fn sinusoidal(base: f64, amplitude: f64, scale: f64) -> Self {
        Self::Sinusoidal { base, amplitude, scale }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant { diffusivity } => *diffusivity,
            Self::Sinusoidal { base, amplitude, scale } => base + amplitude * (x[0] / scale).sin(),
            Self::Piecewise { minus, plus, radius } => {
                let w = smoothstep(x[0], *radius);
                w * plus + (1.0 - w) * minus
            }
            Self::Custom(c) => (c.a)(x),
        }
    }

    /// Radius beyond which the field is constant on each side, when known.
    pub fn homogeneous_beyond(&self) -> Option<f64> {
        match self {
            Self::Constant { .. } => Some(0.0),
            Self::Sinusoidal { amplitude, .. } => (*amplitude == 0.0).then_some(0.0),
            Self::Piecewise { radius, .. } => Some(*radius),
            Self::Custom(c) => c.homogeneous_beyond,
        }
    }

    fn check_params(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("coefficient: {msg}")));
        match self {
            Self::Constant { diffusivity } if !(*diffusivity > 0.0) => bad("diffusivity must be positive"),
            Self::Sinusoidal { base, amplitude, scale } => {
                if !(*scale > 0.0) {
                    bad("scale must be positive")
                } else if !(base - amplitude.abs() > 0.0) {
                    bad("base - |amplitude| must be positive")
                } else {
                    Ok(())
                }
            }
            Self::Piecewise { minus, plus, radius } if !(*minus > 0.0 && *plus > 0.0 && *radius >= 0.0) => {
                bad("piecewise values must be positive and radius non-negative")
            }
            _ => Ok(()),
        }
    }
}

/// Shape `g(u)` of a separable reaction `r(x) g(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `u (1 - u)`.
    Logistic,
    /// `u^2 (1 - u)`; violates the KPP lower bound and exists as a negative control.
    WeakAllee,
}

/// User-supplied reaction term.
#[derive(Clone)]
pub struct CustomReaction {
    pub f: ReactionFn,
    pub homogeneous_beyond: Option<f64>,
}

impl fmt::Debug for CustomReaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomReaction")
            .field("homogeneous_beyond", &self.homogeneous_beyond)
            .finish_non_exhaustive()
    }
}

/// Reaction term `f(x, u)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Reaction {
    /// `rate * u (1 - u)`.
    Logistic { rate: f64 },
    /// `(base + amplitude * sin(x / scale)) * g(u)`.
    Separable {
        base: f64,
        amplitude: f64,
        scale: f64,
        shape: Nonlinearity,
    },
    /// `w(x) f+(u) + (1 - w(x)) f-(u)` with `f±(u) = rate± * min(u, theta (1 - u) / (1 - theta))`
    /// and `w` the smoothstep on `[-radius, radius]`.
    PiecewiseKpp {
        rate_minus: f64,
        rate_plus: f64,
        theta: f64,
        radius: f64,
    },
    /// `rate * u`; linear growth, used for the half-line problems.
    Linear { rate: f64 },
    /// Pure diffusion.
    None,
    #[serde(skip)]
    Custom(CustomReaction),
}

/// Reaction with its spatial dependence frozen at one point.
#[derive(Clone)]
pub enum LocalReaction {
    Zero,
    Linear(f64),
    Logistic(f64),
    WeakAllee(f64),
    Tent { rate: f64, theta: f64 },
    Custom { f: ReactionFn, x: [f64; 2], dim: usize },
}

impl LocalReaction {
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Linear(r) => r * u,
            Self::Logistic(r) => r * u * (1.0 - u),
            Self::WeakAllee(r) => r * u * u * (1.0 - u),
            Self::Tent { rate, theta } => rate * u.min(theta * (1.0 - u) / (1.0 - theta)),
            Self::Custom { f, x, dim } => f(&x[..*dim], u),
        }
    }

    /// `f(1 - w)` evaluated without forming `1 - w` where the closed form allows it, so that
    /// the value keeps full relative precision for `w` near zero.
    #[inline]
    pub fn eval_complement(&self, w: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Linear(r) => r * (1.0 - w),
            Self::Logistic(r) => r * (1.0 - w) * w,
            Self::WeakAllee(r) => r * (1.0 - w) * (1.0 - w) * w,
            Self::Tent { rate, theta } => rate * (1.0 - w).min(theta * w / (1.0 - theta)),
            Self::Custom { f, x, dim } => f(&x[..*dim], 1.0 - w),
        }
    }
}

impl Reaction {
    pub fn logistic(rate: f64) -> Self {
        Self::Logistic { rate }
    }

    pub fn piecewise_kpp(rate_minus: f64, rate_plus: f64, theta: f64, radius: f64) -> Self {
        Self::PiecewiseKpp { rate_minus, rate_plus, theta, radius }
    }

    pub fn custom(f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static, homogeneous_beyond: Option<f64>) -> Self {
        Self::Custom(CustomReaction { f: Arc::new(f), homogeneous_beyond })
    }

    pub fn local(&self, x: &[f64]) -> LocalReaction {
        match self {
            Self::Logistic { rate } => LocalReaction::Logistic(*rate),
            Self::Separable { base, amplitude, scale, shape } => {
                let r = base + amplitude * (x[0] / scale).sin();
                match shape {
                    Nonlinearity::Logistic => LocalReaction::Logistic(r),
                    Nonlinearity::WeakAllee => LocalReaction::WeakAllee(r),
                }
            }
            Self::PiecewiseKpp { rate_minus, rate_plus, theta, radius } => {
                let w = smoothstep(x[0], *radius);
                LocalReaction::Tent { rate: w * rate_plus + (1.0 - w) * rate_minus, theta: *theta }
            }
            Self::Linear { rate } => LocalReaction::Linear(*rate),
            Self::None => LocalReaction::Zero,
            Self::Custom(c) => {
                let mut p = [0.0; 2];
                p[..x.len()].copy_from_slice(x);
                LocalReaction::Custom { f: c.f.clone(), x: p, dim: x.len() }
            }
        }
    }

    pub fn eval(&self, x: &[f64], u: f64) -> f64 {
        self.local(x).eval(u)
    }

    pub fn homogeneous_beyond(&self) -> Option<f64> {
        match self {
            Self::Logistic { .. } | Self::Linear { .. } | Self::None => Some(0.0),
            Self::Separable { amplitude, .. } => (*amplitude == 0.0).then_some(0.0),
            Self::PiecewiseKpp { radius, .. } => Some(*radius),
            Self::Custom(c) => c.homogeneous_beyond,
        }
    }

    /// The homogeneous logistic rate, if the reaction is `rate * u (1 - u)` everywhere.
    pub fn logistic_rate(&self) -> Option<f64> {
        match self {
            Self::Logistic { rate } => Some(*rate),
            Self::Separable { base, amplitude, shape: Nonlinearity::Logistic, .. } if *amplitude == 0.0 => {
                Some(*base)
            }
            _ => None,
        }
    }

    fn check_params(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("reaction: {msg}")));
        match self {
            Self::Logistic { rate } | Self::Linear { rate } if !rate.is_finite() => bad("rate must be finite"),
            Self::Separable { scale, .. } if !(*scale > 0.0) => bad("scale must be positive"),
            Self::PiecewiseKpp { rate_minus, rate_plus, theta, radius } => {
                if !(*rate_minus > 0.0 && *rate_plus > 0.0) {
                    bad("rates must be positive")
                } else if !(*theta > 0.0 && *theta < 1.0) {
                    bad("theta must lie in (0, 1)")
                } else if !(*radius >= 0.0) {
                    bad("radius must be non-negative")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Which localisation hypothesis an initial condition falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayClass {
    /// `u0 = O(exp(-beta |x|^2))`, including compact support.
    Gaussian,
    /// `gamma exp(-lambda |x|) <= u0 <= delta exp(-lambda |x|)` for large `|x|`.
    Exponential,
    /// Not localised.
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `amplitude * exp(-decay |x|^2)`.
    Gaussian { amplitude: f64, decay: f64 },
    /// `min(1, amplitude * exp(-rate |x|))`.
    Exponential { amplitude: f64, rate: f64 },
    /// `height` on the closed ball of `radius`, zero outside.
    Bump { radius: f64, height: f64 },
    /// Spatially constant; fills the truncated domain.
    Constant { value: f64 },
}

impl InitialCondition {
    pub fn bump(radius: f64, height: f64) -> Self {
        Self::Bump { radius, height }
    }

    /// Unclipped value.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Self::Gaussian { amplitude, decay } => amplitude * (-decay * r2).exp(),
            Self::Exponential { amplitude, rate } => amplitude * (-rate * r2.sqrt()).exp(),
            Self::Bump { radius, height } => {
                if r2 <= radius * radius {
                    *height
                } else {
                    0.0
                }
            }
            Self::Constant { value } => *value,
        }
    }

    pub fn decay_class(&self) -> DecayClass {
        match self {
            Self::Gaussian { .. } | Self::Bump { .. } => DecayClass::Gaussian,
            Self::Exponential { .. } => DecayClass::Exponential,
            Self::Constant { .. } => DecayClass::None,
        }
    }

    fn check_params(&self) -> Result<()> {
        let ok = match self {
            Self::Gaussian { amplitude, decay } => *amplitude > 0.0 && *decay > 0.0,
            Self::Exponential { amplitude, rate } => *amplitude > 0.0 && *rate > 0.0,
            Self::Bump { radius, height } => *radius >= 0.0 && *height > 0.0,
            Self::Constant { value } => *value > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("initial condition has non-positive parameters: {self:?}")))
        }
    }
}

/// Sample `u0` on `grid`, clipped to `[0, 1]`.
pub fn make_initial(spec: &InitialCondition, grid: &Grid) -> Result<GridFunction> {
    let u0 = GridFunction::from_fn(grid.clone(), |x| spec.eval(x).clamp(0.0, 1.0));
    if u0.values().iter().all(|&v| v == 0.0) {
        return Err(Error::TrivialInitialCondition);
    }
    Ok(u0)
}

/// A complete reaction-diffusion problem on the truncated box `[-half_width, half_width]^dim`.
#[derive(Debug, Clone)]
pub struct Problem {
    dimension: usize,
    half_width: f64,
    pub coefficient: CoefficientField,
    pub reaction: Reaction,
    pub initial: InitialCondition,
}

impl Problem {
    pub fn new(
        dimension: usize,
        half_width: f64,
        coefficient: CoefficientField,
        reaction: Reaction,
        initial: InitialCondition,
    ) -> Result<Self> {
        if dimension != 1 && dimension != 2 {
            return Err(Error::InvalidInput(format!("dimension must be 1 or 2, got {dimension}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidInput(format!("half-width must be positive, got {half_width}")));
        }
        coefficient.check_params()?;
        reaction.check_params()?;
        initial.check_params()?;
        for r in [coefficient.homogeneous_beyond(), reaction.homogeneous_beyond()].into_iter().flatten() {
            if r > 0.0 && half_width <= r {
                return Err(Error::InvalidInput(format!(
                    "half-width {half_width} must exceed the transition radius {r}"
                )));
            }
        }
        Ok(Self { dimension, half_width, coefficient, reaction, initial })
    }

    /// `a = 1`, `f = rate u (1 - u)`, box bump of radius 1 and height 1.
    pub fn homogeneous_kpp(dimension: usize, half_width: f64, diffusivity: f64, rate: f64) -> Result<Self> {
        Self::new(
            dimension,
            half_width,
            CoefficientField::constant(diffusivity),
            Reaction::logistic(rate),
            InitialCondition::bump(1.0, 1.0),
        )
    }

    /// One-dimensional problem with linear-near-zero KPP tails of different rates on each side.
    pub fn piecewise_kpp(
        half_width: f64,
        rate_minus: f64,
        rate_plus: f64,
        theta: f64,
        radius: f64,
        diffusivity: f64,
    ) -> Result<Self> {
        Self::new(
            1,
            half_width,
            CoefficientField::constant(diffusivity),
            Reaction::piecewise_kpp(rate_minus, rate_plus, theta, radius),
            InitialCondition::bump(1.0, 1.0),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn grid(&self, h: f64) -> Result<Grid> {
        Grid::centered(self.dimension, self.half_width, h)
    }
}

/// Hypotheses checked by [`validate_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Hypothesis {
    /// Gaussian or exponential localisation of `u0`.
    InitialDecay,
    /// `nu^-1 <= a(x) <= nu`.
    Ellipticity,
    /// `|grad a| -> 0` at infinity.
    CoefficientFlatAtInfinity,
    /// `f(x, 0) = f(x, 1) = 0`.
    ZeroOneStates,
    /// `u -> f(x, 1 - u) / u` non-increasing on `(0, 1]`.
    KppRatio,
    /// `f(x, s) >= mu s` on `[0, s0]`.
    KppLowerBound,
    /// `osc f_u(., 0) -> 0` at infinity.
    GrowthRateFlatAtInfinity,
}

impl Hypothesis {
    pub fn label(self) -> &'static str {
        match self {
            Self::InitialDecay => "initial-decay",
            Self::Ellipticity => "ellipticity",
            Self::CoefficientFlatAtInfinity => "coefficient-flat-at-infinity",
            Self::ZeroOneStates => "zero-one-states",
            Self::KppRatio => "kpp-ratio",
            Self::KppLowerBound => "kpp-lower-bound",
            Self::GrowthRateFlatAtInfinity => "growth-rate-flat-at-infinity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// Not decidable by sampling; reported as a warning.
    Unchecked,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// `(x, u)` sample violating the hypothesis.
    pub witness: Option<(Vec<f64>, f64)>,
    pub note: String,
}

impl Verdict {
    fn pass(note: impl Into<String>) -> Self {
        Self { status: Status::Pass, witness: None, note: note.into() }
    }

    fn fail(witness: Option<(Vec<f64>, f64)>, note: impl Into<String>) -> Self {
        Self { status: Status::Fail, witness, note: note.into() }
    }

    fn unchecked(note: impl Into<String>) -> Self {
        Self { status: Status::Unchecked, witness: None, note: note.into() }
    }
}

/// Sampled structural constants and per-hypothesis verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    /// Smallest `nu >= 1` with `nu^-1 <= a <= nu` on the samples.
    pub nu: f64,
    /// Smallest `L` with `f(x, s) <= L s` on the samples.
    pub lipschitz: f64,
    pub mu: f64,
    pub s0: f64,
    pub verdicts: BTreeMap<Hypothesis, Verdict>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Hypothesis, &Verdict)> {
        self.verdicts.iter().filter(|(_, v)| v.status == Status::Fail)
    }

    pub fn warnings(&self) -> impl Iterator<Item = (&Hypothesis, &Verdict)> {
        self.verdicts.iter().filter(|(_, v)| v.status == Status::Unchecked)
    }
}

/// Check the structural hypotheses on `n_samples` points per axis in `x` and in `u`, with the
/// KPP lower bound measured on `[0, 0.1]`.
pub fn validate_problem(p: &Problem, n_samples: usize) -> Result<HypothesisReport> {
    validate_problem_with_s0(p, n_samples, DEFAULT_S0)
}

pub fn validate_problem_with_s0(p: &Problem, n_samples: usize, s0: f64) -> Result<HypothesisReport> {
    if n_samples < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 samples per axis, got {n_samples}")));
    }
    if !(s0 > 0.0 && s0 < 1.0) {
        return Err(Error::InvalidInput(format!("s0 must lie in (0, 1), got {s0}")));
    }
    let l = p.half_width();
    let axis: Vec<f64> = (0..n_samples)
        .map(|i| -l + 2.0 * l * i as f64 / (n_samples - 1) as f64)
        .collect();
    let points: Vec<Vec<f64>> = match p.dimension() {
        1 => axis.iter().map(|&x| vec![x]).collect(),
        _ => axis
            .iter()
            .flat_map(|&x| axis.iter().map(move |&y| vec![x, y]))
            .collect(),
    };
    let u_samples: Vec<f64> = (0..n_samples).map(|k| k as f64 / (n_samples - 1) as f64).collect();

    let mut verdicts = BTreeMap::new();

    verdicts.insert(
        Hypothesis::InitialDecay,
        match p.initial.decay_class() {
            DecayClass::Gaussian => Verdict::pass("gaussian decay (compact support included)"),
            DecayClass::Exponential => Verdict::pass("exponential decay with gamma = delta"),
            DecayClass::None => Verdict::fail(None, "initial condition is not localised"),
        },
    );

    // Ellipticity.
    let (mut a_min, mut a_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut a_witness = None;
    for x in &points {
        let a = p.coefficient.eval(x);
        if a < a_min {
            a_min = a;
            a_witness = Some(x.clone());
        }
        a_max = a_max.max(a);
    }
    let nu = if a_min > 0.0 { a_max.max(1.0 / a_min).max(1.0) } else { f64::INFINITY };
    verdicts.insert(
        Hypothesis::Ellipticity,
        if nu.is_finite() {
            Verdict::pass(format!("a in [{a_min}, {a_max}]"))
        } else {
            Verdict::fail(a_witness.map(|x| (x, 0.0)), "diffusivity not positive")
        },
    );
    verdicts.insert(
        Hypothesis::CoefficientFlatAtInfinity,
        match p.coefficient.homogeneous_beyond() {
            Some(r) => Verdict::pass(format!("constant for |x| >= {r}")),
            None => Verdict::unchecked("gradient decay at infinity is not checked for this coefficient"),
        },
    );

    // f(x, 0) = f(x, 1) = 0.
    for x in &points {
        for u in [0.0, 1.0] {
            let value = p.reaction.eval(x, u);
            if !(value.abs() <= ZERO_STATE_TOLERANCE) {
                return Err(Error::MalformedReaction { x: x.clone(), u, value });
            }
        }
    }
    verdicts.insert(Hypothesis::ZeroOneStates, Verdict::pass("f vanishes at 0 and 1"));

    // Ratio f(x, 1 - u) / u non-increasing in u.
    let mut ratio_verdict = Verdict::pass("non-increasing on every sampled x");
    'ratio: for x in &points {
        let local = p.reaction.local(x);
        let mut prev = f64::INFINITY;
        for &u in &u_samples[1..] {
            let r = local.eval(1.0 - u) / u;
            if r > prev + 1e-12 * prev.abs().max(1.0) {
                ratio_verdict = Verdict::fail(Some((x.clone(), u)), format!("ratio rises from {prev} to {r}"));
                break 'ratio;
            }
            prev = r;
        }
    }
    verdicts.insert(Hypothesis::KppRatio, ratio_verdict);

    // mu on [0, s0] and the Lipschitz-type bound L on [0, 1].
    let low: Vec<f64> = SMALL_PROBES
        .iter()
        .copied()
        .filter(|&s| s < s0)
        .chain((1..n_samples).map(|k| s0 * k as f64 / (n_samples - 1) as f64))
        .collect();
    let all: Vec<f64> = SMALL_PROBES.iter().copied().chain(u_samples[1..].iter().copied()).collect();
    let mut mu = f64::INFINITY;
    let mut mu_witness = None;
    let mut lipschitz: f64 = 0.0;
    for x in &points {
        let local = p.reaction.local(x);
        for &s in &low {
            let r = local.eval(s) / s;
            if r < mu {
                mu = r;
                mu_witness = Some((x.clone(), s));
            }
        }
        for &s in &all {
            lipschitz = lipschitz.max(local.eval(s) / s);
        }
    }
    verdicts.insert(
        Hypothesis::KppLowerBound,
        if mu >= MU_FLOOR {
            Verdict::pass(format!("f(x, s) >= {mu} s on [0, {s0}]"))
        } else {
            Verdict::fail(mu_witness, format!("f(x, s) / s drops to {mu} near zero"))
        },
    );
    verdicts.insert(
        Hypothesis::GrowthRateFlatAtInfinity,
        match p.reaction.homogeneous_beyond() {
            Some(r) => Verdict::pass(format!("x-independent for |x| >= {r}")),
            None => Verdict::unchecked("oscillation of f_u(., 0) at infinity is not checked for this reaction"),
        },
    );

    for (h, v) in &verdicts {
        if v.status == Status::Unchecked {
            log::warn!("{}: {}", h.label(), v.note);
        }
    }

    Ok(HypothesisReport { nu, lipschitz, mu: mu.max(0.0), s0, verdicts })
}
