use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed reaction: f({x:?}, {u}) = {value:e} (must vanish at u = 0 and u = 1)")]
    MalformedReaction { x: Vec<f64>, u: f64, value: f64 },

    #[error("initial condition is identically zero on the grid")]
    TrivialInitialCondition,

    #[error("time step {dt:e} exceeds the stability bound {limit:e}")]
    Stability { dt: f64, limit: f64 },

    #[error("non-finite value at node {node} (t = {t})")]
    NonFinite { t: f64, node: usize },

    #[error("maximum principle violated at node {node} (t = {t}): value {value:e}")]
    MaximumPrinciple { t: f64, node: usize, value: f64 },

    #[error("boundary leak {value:e} at t = {t} exceeds the abort threshold {threshold:e}")]
    BoundaryLeak { t: f64, value: f64, threshold: f64 },

    #[error("kernel mass {mass} at t = {t} deviates from 1 by more than {tolerance:e}")]
    MassLoss { t: f64, mass: f64, tolerance: f64 },

    #[error("no crossing of level {level}")]
    NoCrossing { level: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("hypothesis mismatch: {0}")]
    HypothesisMismatch(String),

    #[error("window is empty after floor filtering")]
    EmptyWindow,

    #[error("no finite sandwich constant up to K = {k_max}")]
    NoFiniteConstant { k_max: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Numerical aborts, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Stability { .. }
                | Error::NonFinite { .. }
                | Error::MaximumPrinciple { .. }
                | Error::BoundaryLeak { .. }
                | Error::MassLoss { .. }
        )
    }
}
