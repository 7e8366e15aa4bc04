//! Auto-overlapping benchmark problems: composition of rotated, transformed
//! base functions over overlapping subspaces of a permuted variable vector.

mod base;
mod instance;
mod io;
pub(crate) mod sampling;
mod transform;

pub use base::{ackley, elliptic, rastrigin, schwefel, BaseFunction};
pub use instance::{
    cap_overlaps, gamma_preset, gamma_preset_for, mini_subspace_sizes, ProblemInstance,
    ProblemSpec, Rotation, ASYMMETRY_BETA, DEFAULT_SUBSPACE_SIZES, GAMMA_LEVELS, SHIFT_RANGE,
};
pub use io::{instance_from_json, instance_to_json, load_instance, save_instance, FORMAT_VERSION};
pub use transform::{t_asy, t_asy_in_place, t_osz, t_osz_in_place};
