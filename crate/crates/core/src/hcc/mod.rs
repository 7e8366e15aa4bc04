//! Two-phase hybrid optimizer: an overlap-sized global phase followed by
//! cooperative co-evolution with contribution-weighted blending.

mod budget;
mod config;
mod run;
mod trace;

pub use budget::{blend_overlap, glo_fes, glo_fes_from_counts};
pub use config::{HccConfig, PhaseSettings, DEFAULT_TFES, DEFAULT_TRACE_STRIDE};
pub use run::{
    run_cc, run_cc_with_events, run_hcc, run_hcc_with_events, run_nda, ContextState, HccEvent,
    HccOutcome, HccStats,
};
pub use trace::RunTrace;
