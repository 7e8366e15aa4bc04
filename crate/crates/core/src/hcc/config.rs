use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::{OptimizerKind, DEFAULT_SIGMA0, DEFAULT_STAGNATION_WINDOW};

pub const DEFAULT_TFES: usize = 3_000_000;
pub const DEFAULT_TRACE_STRIDE: usize = 5_000;

/// Optimizer settings for one phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSettings {
    pub kind: OptimizerKind,
    pub sigma0: f64,
    /// `None` uses the dimension-based default.
    pub lambda: Option<usize>,
    pub stagnation_window: Option<usize>,
}

impl PhaseSettings {
    /// Separable ES over the full space, no stagnation stop.
    pub fn global_default() -> Self {
        Self {
            kind: OptimizerKind::SepCmaes,
            sigma0: DEFAULT_SIGMA0,
            lambda: None,
            stagnation_window: None,
        }
    }

    /// Full-covariance ES per subspace, stopping after 100 idle samples.
    pub fn subspace_default() -> Self {
        Self {
            kind: OptimizerKind::Cmaes,
            sigma0: DEFAULT_SIGMA0,
            lambda: None,
            stagnation_window: Some(DEFAULT_STAGNATION_WINDOW),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HccConfig {
    pub tfes: usize,
    pub target: Option<f64>,
    pub global: PhaseSettings,
    pub subspace: PhaseSettings,
    pub seed: u64,
    /// Visit groups so that overlapping ones are consecutive.
    pub chain_order: bool,
    /// Best-so-far is also sampled every this many evaluations.
    pub trace_stride: usize,
}

impl Default for HccConfig {
    fn default() -> Self {
        Self {
            tfes: DEFAULT_TFES,
            target: None,
            global: PhaseSettings::global_default(),
            subspace: PhaseSettings::subspace_default(),
            seed: 0,
            chain_order: true,
            trace_stride: DEFAULT_TRACE_STRIDE,
        }
    }
}

impl HccConfig {
    pub fn new(tfes: usize, seed: u64) -> Self {
        Self {
            tfes,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tfes == 0 {
            return Err(Error::InvalidConfig("tfes must be positive".into()));
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidConfig("trace stride must be positive".into()));
        }
        for p in [&self.global, &self.subspace] {
            if !(p.sigma0 > 0.0 && p.sigma0.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "sigma0 must be positive, got {}",
                    p.sigma0
                )));
            }
            if p.lambda.is_some_and(|l| l < 2) {
                return Err(Error::InvalidConfig("lambda must be at least 2".into()));
            }
        }
        Ok(())
    }
}
