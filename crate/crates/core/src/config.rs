//! Declarative run configuration (TOML). Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CoefficientField, InitialCondition, Problem, Reaction};
use crate::solver::{comb, Scheme, SolverConfig, TimeStep};
use crate::tumor::TreatmentSchedule;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub dimension: usize,
    pub half_width: f64,
    pub coefficient: CoefficientField,
    pub reaction: Reaction,
    pub initial: InitialCondition,
}

/// `"auto"` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "DtRaw", into = "DtRaw")]
pub struct DtSetting(pub TimeStep);

impl Default for TimeStep {
    fn default() -> Self {
        TimeStep::Auto
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DtRaw {
    Number(f64),
    Word(String),
}

impl TryFrom<DtRaw> for DtSetting {
    type Error = String;

    fn try_from(raw: DtRaw) -> std::result::Result<Self, String> {
        match raw {
            DtRaw::Number(v) if v > 0.0 && v.is_finite() => Ok(Self(TimeStep::Fixed(v))),
            DtRaw::Number(v) => Err(format!("dt must be positive, got {v}")),
            DtRaw::Word(w) if w == "auto" => Ok(Self(TimeStep::Auto)),
            DtRaw::Word(w) => Err(format!("dt must be \"auto\" or a number, got \"{w}\"")),
        }
    }
}

impl From<DtSetting> for DtRaw {
    fn from(d: DtSetting) -> Self {
        match d.0 {
            TimeStep::Auto => DtRaw::Word("auto".into()),
            TimeStep::Fixed(v) => DtRaw::Number(v),
        }
    }
}

fn default_scheme() -> Scheme {
    Scheme::ExplicitEuler
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub h: f64,
    pub t_final: f64,
    #[serde(default)]
    pub dt: DtSetting,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    /// Uniform snapshot spacing from `t = 0`.
    pub comb: Option<f64>,
    /// Extra snapshot times.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    pub boundary_leak_tolerance: Option<f64>,
    pub boundary_leak_abort: Option<f64>,
}

fn default_eps() -> Vec<f64> {
    vec![0.1]
}

fn default_levels() -> Vec<f64> {
    vec![0.5]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    /// Time window for spreading-speed fits.
    pub speed_window: Option<[f64; 2]>,
    /// Comb floor for the shift-monotonicity estimate.
    pub tau_floor: Option<f64>,
    /// Also certify global positivity (1D problems with linear outer tails).
    #[serde(default)]
    pub theorem2: bool,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self { eps: default_eps(), levels: default_levels(), speed_window: None, tau_floor: None, theorem2: false }
    }
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Write every n-th snapshot to the trajectory file.
    #[serde(default = "one")]
    pub time_stride: usize,
    /// Write every n-th node (per axis).
    #[serde(default = "one")]
    pub space_stride: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: None, time_stride: 1, space_stride: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    pub solver: SolverSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    pub tumor: Option<TreatmentSchedule>,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_value(value: toml::Value) -> Result<Self> {
        let cfg: Self = value.try_into().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check everything that can be checked without computing.
    pub fn validate(&self) -> Result<()> {
        let schema = |e: Error| Error::Config(e.to_string());
        self.problem().map_err(schema)?;
        let s = &self.solver;
        if !(s.h > 0.0) || !(s.t_final > 0.0) {
            return Err(Error::Config("solver.h and solver.t_final must be positive".into()));
        }
        if s.comb.is_some_and(|c| !(c > 0.0)) {
            return Err(Error::Config("solver.comb must be positive".into()));
        }
        if let Some(t) = s.snapshot_times.iter().find(|&&t| !(t >= 0.0 && t <= s.t_final)) {
            return Err(Error::Config(format!("snapshot time {t} is outside [0, {}]", s.t_final)));
        }
        let a = &self.analysis;
        if a.eps.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::Config("analysis.eps values must lie in (0, 1]".into()));
        }
        if a.levels.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::Config("analysis.levels values must lie in (0, 1)".into()));
        }
        if let Some(sched) = &self.tumor {
            sched.validate().map_err(schema)?;
            if sched.events.iter().any(|e| e.t >= s.t_final) {
                return Err(Error::Config("tumor events must precede solver.t_final".into()));
            }
        }
        if self.output.time_stride == 0 || self.output.space_stride == 0 {
            return Err(Error::Config("output strides must be at least 1".into()));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<Problem> {
        let p = &self.problem;
        Problem::new(p.dimension, p.half_width, p.coefficient.clone(), p.reaction.clone(), p.initial.clone())
    }

    pub fn solver_config(&self) -> SolverConfig {
        let s = &self.solver;
        let mut times = s.comb.map_or_else(Vec::new, |c| comb(0.0, s.t_final, c));
        times.extend_from_slice(&s.snapshot_times);
        times.sort_by(f64::total_cmp);
        times.dedup();
        let mut cfg = SolverConfig::new(s.h, s.t_final).with_scheme(s.scheme).with_snapshot_times(times);
        cfg.dt = s.dt.0;
        if let Some(v) = s.boundary_leak_tolerance {
            cfg.boundary_leak_tolerance = v;
        }
        if let Some(v) = s.boundary_leak_abort {
            cfg.boundary_leak_abort = v;
        }
        cfg
    }
}

/// Set a dotted key path (numeric segments index arrays) to a number. The existing value must
/// be numeric.
pub fn set_numeric(root: &mut toml::Value, path: &str, value: f64) -> Result<()> {
    let mut node = root;
    for segment in path.split('.') {
        node = match node {
            toml::Value::Table(t) => t.get_mut(segment),
            toml::Value::Array(a) => segment.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| Error::Config(format!("sweep key `{path}` does not exist in the config")))?;
    }
    match node {
        toml::Value::Float(_) => *node = toml::Value::Float(value),
        toml::Value::Integer(_) if value.fract() == 0.0 => *node = toml::Value::Integer(value as i64),
        toml::Value::Integer(_) => *node = toml::Value::Float(value),
        _ => return Err(Error::Config(format!("sweep key `{path}` is not numeric"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[problem]
dimension = 1
half_width = 30.0
coefficient = { kind = "constant", diffusivity = 1.0 }
reaction = { kind = "logistic", rate = 1.0 }
initial = { kind = "bump", radius = 1.0, height = 1.0 }

[solver]
h = 0.1
t_final = 5.0
comb = 1.0
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = RunConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg.solver.dt.0, TimeStep::Auto);
        assert_eq!(cfg.analysis.eps, vec![0.1]);
        assert_eq!(cfg.solver_config().snapshot_times.len(), 6);
    }

    #[test]
    fn dt_forms() {
        let with = |dt: &str| RunConfig::from_toml_str(&MINIMAL.replace("comb = 1.0", &format!("comb = 1.0\ndt = {dt}")));
        assert_eq!(with("0.001").unwrap().solver.dt.0, TimeStep::Fixed(0.001));
        assert_eq!(with("\"auto\"").unwrap().solver.dt.0, TimeStep::Auto);
        assert!(with("\"fast\"").is_err());
        assert!(with("-1.0").is_err());
    }

    #[test]
    fn unknown_key_is_named() {
        let bad = MINIMAL.replace("reaction =", "reation =");
        let err = RunConfig::from_toml_str(&bad).unwrap_err().to_string();
        assert!(err.contains("reation"), "{err}");
    }

    #[test]
    fn invalid_problem_is_a_config_error() {
        let bad = MINIMAL.replace("dimension = 1", "dimension = 3");
        assert!(matches!(RunConfig::from_toml_str(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn numeric_paths() {
        let mut v: toml::Value = toml::from_str(
            &(MINIMAL.to_string() + "\n[tumor]\nsigma = 0.3\nevents = [{ t = 2.0, beta = 0.5 }]\n"),
        )
        .unwrap();
        set_numeric(&mut v, "tumor.events.0.beta", 0.7).unwrap();
        set_numeric(&mut v, "problem.dimension", 2.0).unwrap();
        let cfg = RunConfig::from_value(v.clone()).unwrap();
        assert_eq!(cfg.tumor.unwrap().events[0].beta, 0.7);
        assert_eq!(cfg.problem.dimension, 2);
        assert!(set_numeric(&mut v, "problem.reaction.kind", 1.0).is_err());
        assert!(set_numeric(&mut v, "problem.missing", 1.0).is_err());
    }
}
