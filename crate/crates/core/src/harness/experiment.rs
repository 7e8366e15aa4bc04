use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig};
use super::report::{
    emit_report, phases_path, summarize, trace_path, write_median_curves, write_runs_csv,
    ResultRow, RunRecord, STATUS_OK,
};
use super::seeds::{check_unique, run_seed};
use crate::aob::{save_instance, ProblemInstance};
use crate::decomposition::{accuracy, random_decomposition, rddsm, Decomposition};
use crate::error::{Error, Result};
use crate::hcc::{run_cc, run_hcc, run_nda, HccConfig, HccOutcome};

/// Everything `run_experiment` produced, also written under `output_dir`.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub rows: Vec<ResultRow>,
    pub records: Vec<RunRecord>,
}

struct Prepared {
    id: String,
    instance: ProblemInstance,
    truth: Decomposition,
    found: Decomposition,
    found_acc: f64,
}

/// Runs every (problem, algorithm, run) job and writes traces, per-run
/// records, summaries and median curves.
///
/// All problems are generated from `seed0`. Decomposition is taken from
/// the exact interaction matrix and costs no evaluations. A job that fails
/// is kept in `runs.csv` with its error as status.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    config.validate()?;
    let dir = config.output_dir.as_path();
    for sub in ["instances", "traces", "curves"] {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    let cfg_path = dir.join("config.json");
    fs::write(&cfg_path, serde_json::to_string_pretty(config)?)
        .map_err(|e| Error::io(&cfg_path, e))?;

    let mut problems = Vec::with_capacity(config.suite.len());
    for entry in &config.suite {
        let id = entry.problem_id();
        let instance = ProblemInstance::generate(&entry.spec(config.scale, config.seed0)?)?;
        save_instance(&instance, dir.join("instances").join(format!("{id}.json")))?;
        let truth = instance.true_subspaces();
        let found = rddsm(&instance.ground_truth_theta())?;
        let found_acc = accuracy(&found, &truth, instance.dimension())?;
        problems.push(Prepared {
            id,
            instance,
            truth,
            found,
            found_acc,
        });
    }

    let runs = config.runs();
    let mut jobs = Vec::new();
    for (p, prob) in problems.iter().enumerate() {
        for &alg in &config.algorithms {
            for run in 0..runs {
                jobs.push((p, alg, run, run_seed(config.seed0, &prob.id, alg, run)));
            }
        }
    }
    check_unique(
        &jobs
            .iter()
            .map(|&(p, a, r, s)| (problems[p].id.clone(), a, r, s))
            .collect::<Vec<_>>(),
    )?;
    for (p, alg) in problems
        .iter()
        .flat_map(|p| config.algorithms.iter().map(move |&a| (p, a)))
    {
        let d = dir.join("traces").join(&p.id).join(alg.id());
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let tfes = config.tfes();
    let records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, alg, run, seed)| execute(dir, &problems[p], alg, run, seed, tfes))
            .collect()
    });

    write_runs_csv(&records, &dir.join("runs.csv"))?;
    let rows = summarize(&records);
    emit_report(&rows, dir)?;
    write_median_curves(dir, &records)?;
    Ok(ExperimentSummary { rows, records })
}

fn execute(
    dir: &Path,
    prob: &Prepared,
    alg: Algorithm,
    run: usize,
    seed: u64,
    tfes: usize,
) -> RunRecord {
    let mut record = RunRecord {
        problem: prob.id.clone(),
        algorithm: alg,
        run,
        seed,
        final_value: f64::NAN,
        fes: 0,
        time: 0.0,
        acc: None,
        status: STATUS_OK.into(),
    };
    let attempt = catch_unwind(AssertUnwindSafe(|| -> Result<(HccOutcome, Option<f64>)> {
        let hcc = HccConfig::new(tfes, seed);
        let d = prob.instance.dimension();
        Ok(match alg {
            Algorithm::Hcc => (run_hcc(&prob.instance, &prob.found, &hcc)?, Some(prob.found_acc)),
            Algorithm::CcRddsm => (run_cc(&prob.instance, &prob.found, &hcc)?, Some(prob.found_acc)),
            Algorithm::CcRandom => {
                let blocks = prob.instance.spec().subspace_sizes.len();
                let random = random_decomposition(d, blocks, seed)?;
                let acc = accuracy(&random, &prob.truth, d)?;
                (run_cc(&prob.instance, &random, &hcc)?, Some(acc))
            }
            Algorithm::NdaSep => (run_nda(&prob.instance, &hcc)?, None),
        })
    }));
    let outcome = match attempt {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            record.status = format!("error: {e}");
            return record;
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            record.status = format!("panic: {msg}");
            return record;
        }
    };
    let (out, acc) = outcome;
    record.final_value = out.best_value;
    record.fes = out.trace.final_fes();
    record.time = out.trace.wall_time;
    record.acc = acc;
    let written = out
        .trace
        .write_csv(&trace_path(dir, &prob.id, alg, run))
        .and_then(|()| out.trace.write_phases_csv(&phases_path(dir, &prob.id, alg, run)));
    if let Err(e) = written {
        record.status = format!("error: {e}");
    }
    record
}
