//! Interaction matrices, recursive decomposition and grouping metrics.

mod bitset;
mod dsm;
mod groups;
mod interaction;
mod metrics;
mod rddsm;

pub use dsm::DesignStructureMatrix;
pub use groups::{parse_groups, Decomposition};
pub use interaction::{default_interaction_tolerance, detect_interaction, estimate_theta};
pub use metrics::{
    accuracy, degree_of_overlap, is_ideal_decomposition, overlap_count, random_decomposition,
    IdealReport,
};
pub use rddsm::{rddsm, rddsm_with, RddsmOptions};
