use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use super::stats::{mean, median, std_dev, wilcoxon_rank_sum, Verdict};
use crate::error::{Error, Result};
use crate::hcc::RunTrace;

pub const STATUS_OK: &str = "ok";

/// Outcome of one (problem, algorithm, run) job, one line of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub final_value: f64,
    pub fes: usize,
    /// Optimization wall time in seconds.
    pub time: f64,
    pub acc: Option<f64>,
    /// `ok`, or a short error description.
    pub status: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }
}

/// Aggregated statistics of one (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub problem: String,
    pub algorithm: Algorithm,
    /// Successful runs the statistics are computed over.
    pub runs: usize,
    pub failed: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub mean_time: f64,
    pub mean_fes: f64,
    pub max_fes: usize,
    pub acc: Option<f64>,
    /// Rank-sum verdict of HCC against this row.
    pub verdict: Option<Verdict>,
    #[serde(skip)]
    pub finals: Vec<f64>,
}

pub fn trace_path(dir: &Path, problem: &str, algorithm: Algorithm, run: usize) -> PathBuf {
    dir.join("traces")
        .join(problem)
        .join(algorithm.id())
        .join(format!("run{run}.csv"))
}

pub fn phases_path(dir: &Path, problem: &str, algorithm: Algorithm, run: usize) -> PathBuf {
    dir.join("traces")
        .join(problem)
        .join(algorithm.id())
        .join(format!("run{run}_phases.csv"))
}

pub fn curve_path(dir: &Path, problem: &str, algorithm: Algorithm) -> PathBuf {
    dir.join("curves")
        .join(format!("{problem}_{}_median.csv", algorithm.id()))
}

/// Groups records by cell, keeping first-appearance order of problems and
/// algorithms. Verdicts compare HCC against each other algorithm.
pub fn summarize(records: &[RunRecord]) -> Vec<ResultRow> {
    let mut problems: Vec<&str> = Vec::new();
    let mut algorithms: Vec<Algorithm> = Vec::new();
    let mut cells: BTreeMap<(usize, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let p = position_or_push(&mut problems, r.problem.as_str());
        let a = position_or_push(&mut algorithms, r.algorithm);
        cells.entry((p, a)).or_default().push(r);
    }
    let mut rows: Vec<ResultRow> = cells
        .into_iter()
        .map(|((p, a), recs)| {
            let ok: Vec<&&RunRecord> = recs.iter().filter(|r| r.is_ok()).collect();
            let finals: Vec<f64> = ok.iter().map(|r| r.final_value).collect();
            let times: Vec<f64> = ok.iter().map(|r| r.time).collect();
            let fes: Vec<f64> = ok.iter().map(|r| r.fes as f64).collect();
            let accs: Vec<f64> = ok.iter().filter_map(|r| r.acc).collect();
            ResultRow {
                problem: problems[p].to_string(),
                algorithm: algorithms[a],
                runs: ok.len(),
                failed: recs.len() - ok.len(),
                mean: mean(&finals),
                std: std_dev(&finals),
                median: median(&finals),
                mean_time: mean(&times),
                mean_fes: mean(&fes),
                max_fes: ok.iter().map(|r| r.fes).max().unwrap_or(0),
                acc: (!accs.is_empty()).then(|| mean(&accs)),
                verdict: None,
                finals,
            }
        })
        .collect();

    for k in 0..rows.len() {
        if rows[k].algorithm == Algorithm::Hcc {
            continue;
        }
        let reference = rows
            .iter()
            .find(|r| r.problem == rows[k].problem && r.algorithm == Algorithm::Hcc);
        if let Some(h) = reference {
            rows[k].verdict = wilcoxon_rank_sum(&h.finals, &rows[k].finals)
                .ok()
                .map(|t| t.verdict);
        }
    }
    rows
}

fn position_or_push<T: PartialEq + Copy>(v: &mut Vec<T>, x: T) -> usize {
    v.iter().position(|&y| y == x).unwrap_or_else(|| {
        v.push(x);
        v.len() - 1
    })
}

fn sci(v: f64) -> String {
    format!("{v:.2e}")
}

/// Aligned plain-text table with one line per row, followed by the
/// +/≈/- tally of HCC against each other algorithm.
pub fn format_table(rows: &[ResultRow]) -> String {
    let header = ["Problem", "Algorithm", "Mean±Std", "Time(s)", "Acc", "Verdict"];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.problem.clone(),
                r.algorithm.id().to_string(),
                format!("{}±{}", sci(r.mean), sci(r.std)),
                format!("{:.2}", r.mean_time),
                r.acc.map_or("-".into(), |a| format!("{:.2}%", 100.0 * a)),
                r.verdict.map_or("".into(), |v| v.symbol().to_string()),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for line in &body {
        for (w, cell) in widths.iter_mut().zip(line) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let fmt_line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    writeln!(out, "{}", fmt_line(&header)).unwrap();
    for line in &body {
        let cells: Vec<&str> = line.iter().map(String::as_str).collect();
        writeln!(out, "{}", fmt_line(&cells)).unwrap();
    }

    let mut tallies: Vec<(Algorithm, [usize; 3])> = Vec::new();
    for r in rows {
        if let Some(v) = r.verdict {
            let k = match tallies.iter().position(|t| t.0 == r.algorithm) {
                Some(k) => k,
                None => {
                    tallies.push((r.algorithm, [0; 3]));
                    tallies.len() - 1
                }
            };
            let slot = match v {
                Verdict::Better => 0,
                Verdict::Similar => 1,
                Verdict::Worse => 2,
            };
            tallies[k].1[slot] += 1;
        }
    }
    if !tallies.is_empty() {
        writeln!(out).unwrap();
        for (alg, [b, s, w]) in tallies {
            writeln!(out, "hcc vs {alg}: +/≈/- = {b}/{s}/{w}").unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    problem: &'a str,
    algorithm: &'a str,
    runs: usize,
    failed: usize,
    mean: f64,
    std: f64,
    median: f64,
    mean_time: f64,
    mean_fes: f64,
    max_fes: usize,
    acc: Option<f64>,
    verdict: &'a str,
}

const SUMMARY_HEADER: [&str; 12] = [
    "problem", "algorithm", "runs", "failed", "mean", "std", "median", "mean_time", "mean_fes",
    "max_fes", "acc", "verdict",
];

pub fn write_summary_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(Error::from)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.serialize(SummaryLine {
            problem: &r.problem,
            algorithm: r.algorithm.id(),
            runs: r.runs,
            failed: r.failed,
            mean: r.mean,
            std: r.std,
            median: r.median,
            mean_time: r.mean_time,
            mean_fes: r.mean_fes,
            max_fes: r.max_fes,
            acc: r.acc,
            verdict: r.verdict.map_or("", Verdict::symbol),
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `summary.csv` and `summary.txt` into `dir`.
pub fn emit_report(rows: &[ResultRow], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_summary_csv(rows, &dir.join("summary.csv"))?;
    let txt = dir.join("summary.txt");
    fs::write(&txt, format_table(rows)).map_err(|e| Error::io(&txt, e))
}

pub fn write_runs_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>> {
    if !path.exists() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "runs.csv not found"),
        ));
    }
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|x| x.map_err(Error::from)).collect()
}

/// Pointwise median of best-so-far step curves over the union of their FE
/// grids. A curve that has not started yet counts as +∞; points whose
/// median is infinite are left out.
pub fn median_curve(curves: &[Vec<(usize, f64)>]) -> Vec<(usize, f64)> {
    let mut grid: Vec<usize> = curves.iter().flatten().map(|s| s.0).collect();
    grid.sort_unstable();
    grid.dedup();
    let traces: Vec<RunTrace> = curves
        .iter()
        .map(|c| RunTrace {
            samples: c.clone(),
            ..RunTrace::default()
        })
        .collect();
    grid.into_iter()
        .filter_map(|fes| {
            let vals: Vec<f64> = traces.iter().map(|t| t.best_at(fes)).collect();
            let m = median(&vals);
            m.is_finite().then_some((fes, m))
        })
        .collect()
}

pub fn write_curve_csv(curve: &[(usize, f64)], path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(["fes", "median_best_so_far"])?;
    for &(fes, v) in curve {
        w.serialize((fes, v))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Median curve of every cell from the per-run traces of successful runs.
pub fn write_median_curves(dir: &Path, records: &[RunRecord]) -> Result<()> {
    let curves_dir = dir.join("curves");
    fs::create_dir_all(&curves_dir).map_err(|e| Error::io(&curves_dir, e))?;
    let mut cells: Vec<((&str, Algorithm), Vec<&RunRecord>)> = Vec::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        let key = (r.problem.as_str(), r.algorithm);
        match cells.iter_mut().find(|c| c.0 == key) {
            Some(c) => c.1.push(r),
            None => cells.push((key, vec![r])),
        }
    }
    for ((problem, alg), recs) in cells {
        let traces = recs
            .iter()
            .map(|r| RunTrace::read_csv(&trace_path(dir, problem, alg, r.run)))
            .collect::<Result<Vec<_>>>()?;
        write_curve_csv(&median_curve(&traces), &curve_path(dir, problem, alg))?;
    }
    Ok(())
}

/// Rebuilds summaries and median curves from `runs.csv` and the traces.
pub fn report_from_dir(dir: &Path) -> Result<Vec<ResultRow>> {
    let records = read_runs_csv(&dir.join("runs.csv"))?;
    let rows = summarize(&records);
    emit_report(&rows, dir)?;
    write_median_curves(dir, &records)?;
    Ok(rows)
}
