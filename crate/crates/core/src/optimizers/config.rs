use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Error, Result};

/// Default population size `4 + 3⌈ln n⌉`.
pub fn default_lambda(dim: usize) -> usize {
    4 + 3 * (dim.max(1) as f64).ln().ceil() as usize
}

pub const DEFAULT_SIGMA0: f64 = 0.5;
pub const DEFAULT_STAGNATION_WINDOW: usize = 100;

/// Settings for one budgeted optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub dim: usize,
    pub mean0: Vec<f64>,
    pub sigma0: f64,
    pub lambda: usize,
    /// Maximum number of objective evaluations.
    pub budget: usize,
    /// Consecutive non-improving evaluations before stopping; `None` disables.
    pub stagnation_window: Option<usize>,
    pub bounds: Bounds,
    /// Stop as soon as the best value is at or below this.
    pub target: Option<f64>,
    pub seed: u64,
}

impl OptimizerConfig {
    /// Defaults for everything but the start point, budget, bounds and seed.
    pub fn new(mean0: Vec<f64>, budget: usize, bounds: Bounds, seed: u64) -> Self {
        let dim = mean0.len();
        Self {
            dim,
            mean0,
            sigma0: DEFAULT_SIGMA0,
            lambda: default_lambda(dim),
            budget,
            stagnation_window: Some(DEFAULT_STAGNATION_WINDOW),
            bounds,
            target: None,
            seed,
        }
    }

    pub fn with_sigma0(mut self, sigma0: f64) -> Self {
        self.sigma0 = sigma0;
        self
    }

    pub fn with_lambda(mut self, lambda: usize) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_stagnation_window(mut self, window: Option<usize>) -> Self {
        self.stagnation_window = window;
        self
    }

    pub fn with_target(mut self, target: Option<f64>) -> Self {
        self.target = target;
        self
    }

    /// A budget below `lambda` is accepted and runs one partial generation.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.dim == 0 {
            return bad("dim must be positive".into());
        }
        if self.mean0.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: self.mean0.len(),
            });
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return bad(format!("sigma0 must be positive, got {}", self.sigma0));
        }
        if self.lambda < 2 {
            return bad(format!("lambda must be at least 2, got {}", self.lambda));
        }
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if self.stagnation_window == Some(0) {
            return bad("stagnation window must be positive".into());
        }
        if !self.bounds.is_valid() {
            return bad(format!(
                "invalid bounds [{}, {}]",
                self.bounds.lower, self.bounds.upper
            ));
        }
        if self.mean0.iter().any(|v| !v.is_finite()) {
            return bad("mean0 must be finite".into());
        }
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    Budget,
    Stagnation,
    Target,
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerRun {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub final_mean: Vec<f64>,
    pub final_sigma: f64,
    pub fes_used: usize,
    pub generations: usize,
    pub stopped_by: StopReason,
}

/// Per-generation progress passed to an observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub fes: usize,
    pub best_value: f64,
    pub sigma: f64,
    /// Smallest eigenvalue of the covariance (full) or smallest variance (separable).
    pub min_eigenvalue: f64,
}
