use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hcc_cli::write_output;
use hcc_core::aob::load_instance;
use hcc_core::decomposition::{accuracy, degree_of_overlap, rddsm_with, RddsmOptions};
use hcc_core::{Decomposition, DesignStructureMatrix};

/// Decompose interaction matrices and score decompositions.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group variables of an interaction matrix file.
    Rddsm {
        #[arg(long)]
        theta: PathBuf,
        /// Keep groups that are strict subsets of other groups.
        #[arg(long)]
        keep_subsets: bool,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Accuracy of a found decomposition against the true one.
    Acc {
        #[arg(long)]
        found: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Degree of overlap of a decomposition.
    Overlap {
        #[arg(long)]
        groups: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Write the exact interaction matrix of an instance.
    Theta {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the true subspaces of an instance.
    Truth {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_groups(path: &Path, dim: usize) -> Result<Decomposition> {
    Decomposition::parse_text(&read(path)?, dim).with_context(|| format!("parsing {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Rddsm { theta, keep_subsets, out } => {
            let theta = DesignStructureMatrix::parse_text(&read(&theta)?)?;
            let groups = rddsm_with(&theta, RddsmOptions { prune_subsets: !keep_subsets })?;
            write_output(out.as_deref(), &groups.to_text())?;
            eprintln!("{} groups", groups.len());
        }
        Command::Acc { found, truth, dim } => {
            let acc = accuracy(&read_groups(&found, dim)?, &read_groups(&truth, dim)?, dim)?;
            println!("{acc}");
        }
        Command::Overlap { groups, dim } => {
            println!("{}", degree_of_overlap(&read_groups(&groups, dim)?, dim)?);
        }
        Command::Theta { instance, out } => {
            let inst = load_instance(&instance)?;
            write_output(out.as_deref(), &inst.ground_truth_theta().to_text())?;
        }
        Command::Truth { instance, out } => {
            let inst = load_instance(&instance)?;
            write_output(out.as_deref(), &inst.true_subspaces().to_text())?;
        }
    }
    Ok(())
}
