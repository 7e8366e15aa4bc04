//! Overlapping-subspace benchmark, recursive decomposition, CMA-ES variants
//! and the hybrid global/cooperative optimizer built on them.

pub mod aob;
pub mod bounds;
pub mod decomposition;
pub mod error;
pub mod harness;
pub mod hcc;
pub mod optimizers;
pub mod problem;
pub mod seeding;

pub use aob::{BaseFunction, ProblemInstance, ProblemSpec};
pub use bounds::Bounds;
pub use decomposition::{Decomposition, DesignStructureMatrix};
pub use error::{Error, Result};
pub use problem::Problem;
