use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hcc_cli::{format_value, read_point};
use hcc_core::aob::{load_instance, save_instance};
use hcc_core::{BaseFunction, ProblemInstance, ProblemSpec};

/// Generate and evaluate overlapping benchmark instances.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Full,
    Mini,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file from a preset.
    Generate {
        #[arg(long)]
        base: BaseFunction,
        /// Overlap level 1..=6.
        #[arg(long)]
        gamma_level: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Scale::Full)]
        scale: Scale,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a point stored as comma or whitespace separated reals.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { base, gamma_level, seed, scale, out } => {
            let spec = match scale {
                Scale::Full => ProblemSpec::preset(base, gamma_level, seed)?,
                Scale::Mini => ProblemSpec::mini_preset(base, gamma_level, seed)?,
            };
            let instance = ProblemInstance::generate(&spec)?;
            save_instance(&instance, &out)?;
            eprintln!("wrote {} (D = {})", out.display(), instance.dimension());
        }
        Command::Eval { instance, point } => {
            let instance = load_instance(&instance)?;
            let x = read_point(&point)?;
            if x.len() != instance.dimension() {
                bail!("point has {} values, instance dimension is {}", x.len(), instance.dimension());
            }
            if !instance.in_bounds(&x) {
                eprintln!("warning: point lies outside the search bounds");
            }
            println!("{}", format_value(instance.evaluate(&x)?));
        }
    }
    Ok(())
}
