//! Shared fixtures for the criterion benchmarks.

use hcc_core::{BaseFunction, ProblemInstance, ProblemSpec};

pub const SEED: u64 = 1;

pub fn full_instance(base: BaseFunction, level: u8) -> ProblemInstance {
    ProblemInstance::generate(&ProblemSpec::preset(base, level, SEED).unwrap()).unwrap()
}

pub fn mini_instance(base: BaseFunction, level: u8) -> ProblemInstance {
    ProblemInstance::generate(&ProblemSpec::mini_preset(base, level, SEED).unwrap()).unwrap()
}

/// A deterministic point inside the default bounds.
pub fn probe_point(dim: usize) -> Vec<f64> {
    (0..dim).map(|i| ((i * 37 % 200) as f64) - 99.5).collect()
}
