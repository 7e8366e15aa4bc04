use std::time::Instant;

use super::budget::{blend_overlap, glo_fes_from_counts};
use super::config::{HccConfig, PhaseSettings};
use super::trace::RunTrace;
use crate::decomposition::{overlap_count, Decomposition};
use crate::error::{Error, Result};
use crate::optimizers::{default_lambda, make_subspace_objective, OptimizerConfig, OptimizerRun};
use crate::problem::Problem;
use crate::seeding;

/// Mutable state of the cooperative loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextState {
    pub gbest: Vec<f64>,
    pub gbest_value: f64,
    /// Search mean of each subspace optimizer, in group order.
    pub means: Vec<Vec<f64>>,
    /// Latest improvement contributed by each subspace, floored at 0.
    pub deltas: Vec<f64>,
    pub sum_fes: usize,
}

/// FE accounting of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HccStats {
    pub do_value: f64,
    pub glo_fes: usize,
    pub global_fes: usize,
    pub subspace_fes: usize,
    pub blend_evaluations: usize,
    /// Evaluation of the start point when there is no global phase.
    pub initial_evaluations: usize,
    pub rounds: usize,
    pub sum_fes: usize,
}

#[derive(Debug, Clone)]
pub struct HccOutcome {
    /// Best point ever evaluated.
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub trace: RunTrace,
    pub stats: HccStats,
    /// Loop state at termination, in the visiting order of `groups`.
    pub state: ContextState,
    /// Groups in the order they were optimized.
    pub groups: Vec<Vec<usize>>,
}

/// Progress notifications for observers and tests.
#[derive(Debug, Clone, PartialEq)]
pub enum HccEvent {
    GlobalPhaseDone {
        fes: usize,
        best_value: f64,
        mean: Vec<f64>,
    },
    SubspaceStart {
        round: usize,
        index: usize,
        fes: usize,
        budget: usize,
        mean0: Vec<f64>,
    },
    SubspaceDone {
        round: usize,
        index: usize,
        fes: usize,
        fes_used: usize,
        delta: f64,
        accepted: bool,
    },
    Blend {
        round: usize,
        index: usize,
        overlap: Vec<usize>,
        gbest_before: Vec<f64>,
        gbest_after: Vec<f64>,
        reevaluated: bool,
    },
}

/// Counts evaluations and records the best-so-far curve.
struct Tracker<'a, P: ?Sized> {
    problem: &'a P,
    fes: usize,
    best: f64,
    best_point: Vec<f64>,
    samples: Vec<(usize, f64)>,
    stride: usize,
    error: Option<Error>,
}

impl<'a, P: Problem + ?Sized> Tracker<'a, P> {
    fn new(problem: &'a P, stride: usize) -> Self {
        Self {
            problem,
            fes: 0,
            best: f64::INFINITY,
            best_point: Vec::new(),
            samples: Vec::new(),
            stride,
            error: None,
        }
    }

    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = self.problem.evaluate(x);
        self.fes += 1;
        if !v.is_finite() {
            self.error.get_or_insert(Error::NonFinite {
                value: v,
                fes: self.fes,
            });
            return v;
        }
        if v < self.best {
            self.best = v;
            self.best_point.clear();
            self.best_point.extend_from_slice(x);
            self.samples.push((self.fes, v));
        } else if self.fes.is_multiple_of(self.stride) {
            self.samples.push((self.fes, self.best));
        }
        v
    }

    fn finish(&mut self) {
        if self.samples.last().is_some_and(|s| s.0 != self.fes) {
            self.samples.push((self.fes, self.best));
        }
    }
}

fn optimizer_config(
    settings: &PhaseSettings,
    mean0: Vec<f64>,
    budget: usize,
    problem: &(impl Problem + ?Sized),
    target: Option<f64>,
    seed: u64,
) -> OptimizerConfig {
    let n = mean0.len();
    OptimizerConfig::new(mean0, budget, problem.bounds(), seed)
        .with_sigma0(settings.sigma0)
        .with_lambda(settings.lambda.unwrap_or_else(|| default_lambda(n)))
        .with_stagnation_window(settings.stagnation_window)
        .with_target(target)
}

fn intersect_positions(a: &[usize], b: &[usize]) -> Vec<(usize, usize, usize)> {
    // Both groups are sorted ascending.
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((a[i], i, j));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Global phase sized by the degree of overlap, then cooperative
/// co-evolution over `decomposition` with blending of shared variables.
pub fn run_hcc<P: Problem + ?Sized>(
    problem: &P,
    decomposition: &Decomposition,
    config: &HccConfig,
) -> Result<HccOutcome> {
    run_loop(problem, decomposition, config, true, &mut |_| {})
}

/// [`run_hcc`] reporting each step to `observer`.
pub fn run_hcc_with_events<P: Problem + ?Sized>(
    problem: &P,
    decomposition: &Decomposition,
    config: &HccConfig,
    observer: &mut dyn FnMut(&HccEvent),
) -> Result<HccOutcome> {
    run_loop(problem, decomposition, config, true, observer)
}

/// The cooperative loop alone: no global phase, blending kept.
pub fn run_cc<P: Problem + ?Sized>(
    problem: &P,
    decomposition: &Decomposition,
    config: &HccConfig,
) -> Result<HccOutcome> {
    run_loop(problem, decomposition, config, false, &mut |_| {})
}

pub fn run_cc_with_events<P: Problem + ?Sized>(
    problem: &P,
    decomposition: &Decomposition,
    config: &HccConfig,
    observer: &mut dyn FnMut(&HccEvent),
) -> Result<HccOutcome> {
    run_loop(problem, decomposition, config, false, observer)
}

/// One whole-space run of the global optimizer with the full budget.
pub fn run_nda<P: Problem + ?Sized>(problem: &P, config: &HccConfig) -> Result<HccOutcome> {
    config.validate()?;
    let start = Instant::now();
    let d = problem.dim();
    let mut tr = Tracker::new(problem, config.trace_stride);
    let cfg = optimizer_config(
        &config.global,
        center(problem),
        config.tfes,
        problem,
        config.target,
        seeding::derive(config.seed, 0),
    );
    let run = config.global.kind.optimize(|x| tr.eval(x), &cfg)?;
    if let Some(e) = tr.error.take() {
        return Err(e);
    }
    tr.finish();
    let trace = RunTrace {
        samples: std::mem::take(&mut tr.samples),
        phase_marks: vec![("global".into(), 0)],
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok(HccOutcome {
        best_point: run.best_point.clone(),
        best_value: run.best_value,
        stats: HccStats {
            global_fes: run.fes_used,
            sum_fes: tr.fes,
            ..HccStats::default()
        },
        state: ContextState {
            gbest: run.best_point,
            gbest_value: run.best_value,
            means: vec![run.final_mean],
            deltas: vec![0.0],
            sum_fes: tr.fes,
        },
        groups: vec![(0..d).collect()],
        trace,
    })
}

fn center<P: Problem + ?Sized>(problem: &P) -> Vec<f64> {
    let b = problem.bounds();
    vec![0.5 * (b.lower + b.upper); problem.dim()]
}

fn run_loop<P: Problem + ?Sized>(
    problem: &P,
    decomposition: &Decomposition,
    config: &HccConfig,
    with_global: bool,
    observer: &mut dyn FnMut(&HccEvent),
) -> Result<HccOutcome> {
    config.validate()?;
    let d = problem.dim();
    if decomposition.n() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: decomposition.n(),
        });
    }
    let start = Instant::now();
    let groups: Vec<Vec<usize>> = if config.chain_order {
        decomposition.overlap_chain_order().groups().to_vec()
    } else {
        decomposition.groups().to_vec()
    };
    let k = groups.len();
    let overlapping = overlap_count(decomposition, d)?;
    let glo = if with_global {
        glo_fes_from_counts(overlapping, d, config.tfes)
    } else {
        0
    };
    let mut stats = HccStats {
        do_value: overlapping as f64 / d as f64,
        glo_fes: glo,
        ..HccStats::default()
    };
    let target_hit = |v: f64| config.target.is_some_and(|t| v <= t);

    let mut tr = Tracker::new(problem, config.trace_stride);
    let mut marks: Vec<(String, usize)> = Vec::new();
    let mut stream = 0u64;
    let mut next_seed = || {
        stream += 1;
        seeding::derive(config.seed, stream)
    };

    let (mut gbest, mut gbest_value, omega) = if glo > 0 {
        marks.push(("global".into(), 0));
        let cfg = optimizer_config(&config.global, center(problem), glo, problem, config.target, next_seed());
        let run: OptimizerRun = config.global.kind.optimize(|x| tr.eval(x), &cfg)?;
        if let Some(e) = tr.error.take() {
            return Err(e);
        }
        stats.global_fes = run.fes_used;
        observer(&HccEvent::GlobalPhaseDone {
            fes: tr.fes,
            best_value: run.best_value,
            mean: run.final_mean.clone(),
        });
        marks.push(("cc".into(), tr.fes));
        (run.best_point, run.best_value, run.final_mean)
    } else {
        marks.push(("cc".into(), 0));
        let x0 = center(problem);
        let v = tr.eval(&x0);
        if let Some(e) = tr.error.take() {
            return Err(e);
        }
        stats.initial_evaluations = 1;
        (x0.clone(), v, x0)
    };

    let mut means: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| g.iter().map(|&i| omega[i]).collect())
        .collect();
    let mut deltas = vec![0.0; k];
    let mut sub_best: Vec<Vec<f64>> = means.clone();
    let overlaps: Vec<Vec<(usize, usize, usize)>> = (0..k)
        .map(|i| {
            if i == 0 {
                Vec::new()
            } else {
                intersect_positions(&groups[i - 1], &groups[i])
            }
        })
        .collect();

    let mut round = 0;
    'outer: while tr.fes < config.tfes && !target_hit(tr.best) {
        let sub_fes = (config.tfes - tr.fes) / k;
        if sub_fes == 0 {
            break;
        }
        round += 1;
        marks.push((format!("round{round}"), tr.fes));
        for i in 0..k {
            let remaining = config.tfes - tr.fes;
            if remaining == 0 || target_hit(tr.best) {
                break 'outer;
            }
            let budget = sub_fes.min(remaining);
            observer(&HccEvent::SubspaceStart {
                round,
                index: i,
                fes: tr.fes,
                budget,
                mean0: means[i].clone(),
            });
            let cfg = optimizer_config(
                &config.subspace,
                means[i].clone(),
                budget,
                problem,
                config.target,
                next_seed(),
            );
            let before = gbest_value;
            let run = {
                let objective =
                    make_subspace_objective(|x: &[f64]| tr.eval(x), &gbest, &groups[i])?;
                config.subspace.kind.optimize(objective, &cfg)?
            };
            if let Some(e) = tr.error.take() {
                return Err(e);
            }
            stats.subspace_fes += run.fes_used;
            let accepted = run.best_value < gbest_value;
            if accepted {
                for (&g, &v) in groups[i].iter().zip(&run.best_point) {
                    gbest[g] = v;
                }
                gbest_value = run.best_value;
            }
            deltas[i] = (before - gbest_value).max(0.0);
            means[i] = run.final_mean;
            sub_best[i] = groups[i].iter().map(|&g| gbest[g]).collect();
            observer(&HccEvent::SubspaceDone {
                round,
                index: i,
                fes: tr.fes,
                fes_used: run.fes_used,
                delta: deltas[i],
                accepted,
            });

            // Blending needs one evaluation to keep gbest_value truthful,
            // so it is skipped once the budget is spent.
            let shared = &overlaps[i];
            if shared.is_empty() || tr.fes >= config.tfes {
                continue;
            }
            let prev: Vec<f64> = shared.iter().map(|&(_, pa, _)| sub_best[i - 1][pa]).collect();
            let cur: Vec<f64> = shared.iter().map(|&(g, _, _)| gbest[g]).collect();
            let blended = blend_overlap(&prev, &cur, deltas[i - 1], deltas[i])?;
            let mean_prev: Vec<f64> = shared.iter().map(|&(_, pa, _)| means[i - 1][pa]).collect();
            let mean_cur: Vec<f64> = shared.iter().map(|&(_, _, pb)| means[i][pb]).collect();
            let blended_mean = blend_overlap(&mean_prev, &mean_cur, deltas[i - 1], deltas[i])?;

            let gbest_before = gbest.clone();
            for (s, (&(g, pa, pb), &m)) in shared.iter().zip(&blended_mean).enumerate() {
                gbest[g] = blended[s];
                means[i - 1][pa] = m;
                means[i][pb] = m;
            }
            let changed = shared
                .iter()
                .any(|&(g, _, _)| gbest[g].to_bits() != gbest_before[g].to_bits());
            if changed {
                gbest_value = tr.eval(&gbest);
                if let Some(e) = tr.error.take() {
                    return Err(e);
                }
                stats.blend_evaluations += 1;
                sub_best[i] = groups[i].iter().map(|&g| gbest[g]).collect();
            }
            observer(&HccEvent::Blend {
                round,
                index: i,
                overlap: shared.iter().map(|s| s.0).collect(),
                gbest_before,
                gbest_after: gbest.clone(),
                reevaluated: changed,
            });
        }
    }
    stats.rounds = round;
    stats.sum_fes = tr.fes;
    debug_assert!(tr.fes <= config.tfes);
    tr.finish();

    let trace = RunTrace {
        samples: std::mem::take(&mut tr.samples),
        phase_marks: marks,
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok(HccOutcome {
        best_point: std::mem::take(&mut tr.best_point),
        best_value: tr.best,
        trace,
        stats,
        state: ContextState {
            gbest,
            gbest_value,
            means,
            deltas,
            sum_fes: tr.fes,
        },
        groups,
    })
}
