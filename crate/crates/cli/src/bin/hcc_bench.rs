use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hcc_core::harness::{format_table, report_from_dir, run_experiment, ExperimentConfig};

const WORKERS_ENV: &str = "HCC_BENCH_WORKERS";

/// Run comparison experiments and rebuild their reports.
#[derive(Parser)]
#[command(name = "hcc-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every job of an experiment config (JSON).
    Suite {
        #[arg(long)]
        config: PathBuf,
    },
    /// Rebuild summary files from a finished output directory.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Suite { config } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Ok(v) = std::env::var(WORKERS_ENV) {
                let n = v.trim().parse().with_context(|| format!("{WORKERS_ENV}=`{v}` is not a count"))?;
                cfg.workers = Some(n);
            }
            let summary = run_experiment(&cfg)?;
            print!("{}", format_table(&summary.rows));
            eprintln!("results in {}", cfg.output_dir.display());
        }
        Command::Report { dir } => {
            print!("{}", format_table(&report_from_dir(&dir)?));
        }
    }
    Ok(())
}
