//! Budgeted covariance-matrix-adaptation evolution strategies.

mod cmaes;
mod config;
mod subspace;

pub use cmaes::{cmaes_optimize, sep_cmaes_optimize, OptimizerKind};
pub use config::{
    default_lambda, GenerationRecord, OptimizerConfig, OptimizerRun, StopReason, DEFAULT_SIGMA0,
    DEFAULT_STAGNATION_WINDOW,
};
pub use subspace::make_subspace_objective;
