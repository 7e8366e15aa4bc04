//! Experiment orchestration, statistics and report files.

mod config;
mod experiment;
mod report;
mod seeds;
mod stats;

pub use config::{
    Algorithm, ExperimentConfig, Scale, SuiteEntry, DEFAULT_RUNS_FULL, DEFAULT_RUNS_MINI,
    MINI_TFES_CAP,
};
pub use experiment::{run_experiment, ExperimentSummary};
pub use report::{
    curve_path, emit_report, format_table, median_curve, phases_path, read_runs_csv,
    report_from_dir, summarize, trace_path, write_curve_csv, write_median_curves, write_runs_csv,
    write_summary_csv, ResultRow, RunRecord, STATUS_OK,
};
pub use seeds::{check_unique, run_seed};
pub use stats::{
    mean, median, std_dev, wilcoxon_rank_sum, wilcoxon_rank_sum_with, RankSum, RankSumMethod,
    Verdict, EXACT_LIMIT, SIGNIFICANCE,
};
