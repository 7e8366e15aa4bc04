//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::io::Write;
use std::time::Instant;

use hcc_core::aob::GAMMA_LEVELS;
use hcc_core::decomposition::{
    accuracy, degree_of_overlap, is_ideal_decomposition, random_decomposition, rddsm,
    DesignStructureMatrix,
};
use hcc_core::harness::{
    median, run_experiment, wilcoxon_rank_sum, Algorithm, ExperimentConfig, RunRecord, Scale,
    SuiteEntry, Verdict,
};
use hcc_core::hcc::{blend_overlap, glo_fes, run_hcc_with_events, HccConfig, HccEvent};
use hcc_core::optimizers::{cmaes_optimize, default_lambda, OptimizerConfig, StopReason};
use hcc_core::{BaseFunction, Bounds, ProblemInstance, ProblemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED0: u64 = 20_240_601;

/// Writes past the test harness capture so the line always shows.
fn report(n: u32, name: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{tag}] criterion {n:>2} {name}: {detail}").unwrap();
}

fn full_instances() -> Vec<ProblemInstance> {
    let specs: Vec<ProblemSpec> = BaseFunction::ALL
        .into_iter()
        .flat_map(|b| (1..=6u8).map(move |l| ProblemSpec::preset(b, l, SEED0).unwrap()))
        .collect();
    specs
        .par_iter()
        .map(|s| ProblemInstance::generate(s).unwrap())
        .collect()
}

#[test]
fn criterion_01_rddsm_ideal_on_all_instances() {
    let start = Instant::now();
    let instances = full_instances();
    let accs: Vec<f64> = instances
        .iter()
        .map(|inst| {
            let found = rddsm(&inst.ground_truth_theta()).unwrap();
            accuracy(&found, &inst.true_subspaces(), inst.dimension()).unwrap()
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = accs.len() == 24 && accs.iter().all(|&a| a == 1.0) && secs < 60.0;
    let worst = accs.iter().copied().fold(f64::INFINITY, f64::min);
    report(1, "RDDSM Acc = 1.0 on 24 AOB instances", ok, &format!("min Acc {worst}, {secs:.1}s"));
    assert!(ok);
}

#[test]
fn criterion_02_random_grouping_accuracy_band() {
    let inst = ProblemInstance::generate(&ProblemSpec::preset(BaseFunction::Elliptic, 1, SEED0).unwrap()).unwrap();
    let truth = inst.true_subspaces();
    let accs: Vec<f64> = (0..25)
        .map(|s| accuracy(&random_decomposition(1000, 20, s).unwrap(), &truth, 1000).unwrap())
        .collect();
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    let ok = (0.08..=0.15).contains(&mean);
    report(2, "random grouping mean Acc in [0.08, 0.15]", ok, &format!("mean Acc {mean:.4} over 25 seeds"));
    assert!(ok);
}

#[test]
fn criterion_03_hand_trace_oracles() {
    // f = x0·x3·x4 + x2·x4·x5 + x1·x5
    let theta = DesignStructureMatrix::from_groups(6, &[vec![0, 3, 4], vec![2, 4, 5], vec![1, 5]]).unwrap();
    let got = rddsm(&theta).unwrap();
    let mut expect = vec![vec![0, 3, 4], vec![2, 4, 5], vec![1, 5]];
    expect.sort();
    let trace_ok = got.groups() == &expect[..];

    let ones = rddsm(&DesignStructureMatrix::all_ones(4)).unwrap();
    let ones_ok = ones.groups() == &[vec![0, 1, 2, 3]];

    let blocks = vec![vec![0, 1, 2], vec![3, 4], vec![5], vec![6, 7, 8, 9]];
    let bd = rddsm(&DesignStructureMatrix::from_groups(10, &blocks).unwrap()).unwrap();
    let bd_ok = bd.groups() == &blocks[..];

    let ok = trace_ok && ones_ok && bd_ok;
    report(3, "hand-trace, all-ones and block-diagonal oracles", ok, &format!("{:?}", got.groups()));
    assert!(ok);
}

#[test]
fn criterion_04_decomposition_properties() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED0);
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut matrices: Vec<Vec<Vec<bool>>> = Vec::new();
    for p in [0.2, 0.5, 0.8] {
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let mut m = vec![vec![false; n]; n];
            for i in 0..n {
                m[i][i] = true;
                for j in i + 1..n {
                    let e = rng.random_bool(p);
                    m[i][j] = e;
                    m[j][i] = e;
                }
            }
            matrices.push(m);
        }
    }
    for n in [2usize, 7, 12] {
        let mut m = vec![vec![false; n]; n];
        for i in 0..n {
            m[i][i] = true;
            if i + 1 < n {
                m[i][i + 1] = true;
                m[i + 1][i] = true;
            }
        }
        matrices.push(m);
    }
    for m in &matrices {
        cases += 1;
        let n = m.len();
        let theta = DesignStructureMatrix::from_bool_rows(m).unwrap();
        let d = rddsm(&theta).unwrap();
        let g = d.groups();
        let clique = g.iter().all(|grp| grp.iter().all(|&p| grp.iter().all(|&q| m[p][q])));
        let covered = (0..n).all(|v| g.iter().any(|grp| grp.contains(&v)));
        let edges = (0..n).all(|p| {
            (p + 1..n).all(|q| !m[p][q] || g.iter().any(|grp| grp.contains(&p) && grp.contains(&q)))
        });
        let distinct = g.iter().enumerate().all(|(k, grp)| !g[k + 1..].contains(grp));
        let ideal = is_ideal_decomposition(&d, &theta).unwrap().is_ideal();
        if !(clique && covered && edges && distinct && ideal) {
            failures.push(n);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = cases >= 500 && failures.is_empty() && secs < 30.0;
    report(4, "RDDSM clique/coverage/edge/distinct properties", ok,
        &format!("{cases} matrices, {} failures, {secs:.2}s", failures.len()));
    assert!(ok);
}

#[test]
fn criterion_05_benchmark_correctness() {
    let instances = full_instances();
    let mut worst_opt: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let mut overlaps_ok = true;
    for inst in &instances {
        worst_opt = worst_opt.max(inst.evaluate(inst.shift()).unwrap().abs());
        for r in inst.rotations() {
            worst_orth = worst_orth.max(r.orthogonality_error());
        }
        let s = inst.subspaces();
        for i in 1..s.len() {
            let shared = s[i].iter().filter(|v| s[i - 1].contains(v)).count();
            overlaps_ok &= shared == inst.spec().overlaps[i - 1];
        }
    }
    let do_of = |level: u8| {
        let inst = &instances[level as usize - 1];
        assert_eq!(inst.spec().overlaps[0], GAMMA_LEVELS[level as usize - 1]);
        degree_of_overlap(&inst.true_subspaces(), 1000).unwrap()
    };
    let dos = [do_of(2), do_of(3), do_of(6)];
    let ok = worst_opt <= 1e-9 && worst_orth <= 1e-9 && overlaps_ok && dos == [0.019, 0.057, 0.190];
    report(5, "F(x_opt)=0, orthogonality, overlap sizes, DO values", ok,
        &format!("max |F(x_opt)| {worst_opt:.1e}, max orth err {worst_orth:.1e}, DO {dos:?}"));
    assert!(ok);
}

#[test]
fn criterion_06_budget_arithmetic() {
    let arithmetic = glo_fes(0.0, 3_000_000) == 0
        && glo_fes(0.0, 12_345) == 0
        && glo_fes(0.057, 3_000_000) == 736_800;
    let mut worst_slack = 0i64;
    let mut within = true;
    let cases = [(BaseFunction::Elliptic, 3u8), (BaseFunction::Schwefel, 6), (BaseFunction::Ackley, 1)];
    for (k, (base, level)) in cases.into_iter().enumerate() {
        let inst = ProblemInstance::generate(&ProblemSpec::mini_preset(base, level, SEED0).unwrap()).unwrap();
        let dec = rddsm(&inst.ground_truth_theta()).unwrap();
        let cfg = HccConfig::new(20_000, k as u64);
        let out = run_hcc_with_events(&inst, &dec, &cfg, &mut |_| {}).unwrap();
        let s = out.stats;
        let lambda_max = out.groups.iter().map(|g| default_lambda(g.len())).max().unwrap();
        let allowed = lambda_max + out.groups.len() + s.blend_evaluations;
        let slack = cfg.tfes as i64 - s.sum_fes as i64;
        worst_slack = worst_slack.max(slack);
        within &= s.sum_fes <= cfg.tfes && slack as usize <= allowed;
    }
    let ok = arithmetic && within;
    report(6, "GloFEs values and end-to-end FE budget", ok,
        &format!("glo_fes(0.057, 3e6) = {}, worst slack {worst_slack}", glo_fes(0.057, 3_000_000)));
    assert!(ok);
}

#[test]
fn criterion_07_blending_oracle() {
    let equal = blend_overlap(&[2.0, -3.0, 10.0], &[4.0, 5.0, 0.0], 0.7, 0.7).unwrap();
    let mean_ok = equal.iter().zip([3.0, 1.0, 5.0]).all(|(a, b)| (a - b).abs() < 1e-15);
    let weighted = blend_overlap(&[2.0], &[4.0], 1.0, 3.0).unwrap();
    let weighted_ok = weighted == vec![3.5];

    let inst = ProblemInstance::generate(&ProblemSpec::mini_preset(BaseFunction::Elliptic, 4, SEED0).unwrap()).unwrap();
    let dec = rddsm(&inst.ground_truth_theta()).unwrap();
    let mut blends = 0;
    let mut local = true;
    run_hcc_with_events(&inst, &dec, &HccConfig::new(10_000, 1), &mut |e| {
        if let HccEvent::Blend { overlap, gbest_before, gbest_after, .. } = e {
            blends += 1;
            for (i, (a, b)) in gbest_before.iter().zip(gbest_after).enumerate() {
                if !overlap.contains(&i) && a.to_bits() != b.to_bits() {
                    local = false;
                }
            }
        }
    })
    .unwrap();
    let ok = mean_ok && weighted_ok && local && blends > 0;
    report(7, "blend mean, weighted 3.5, locality", ok,
        &format!("weighted {weighted:?}, {blends} blends checked bitwise"));
    assert!(ok);
}

fn finals(records: &[RunRecord], problem: &str, alg: Algorithm) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.problem == problem && r.algorithm == alg && r.is_ok())
        .map(|r| r.final_value)
        .collect()
}

#[test]
fn criterion_08_directional_performance() {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let entry = |base, gamma_level| SuiteEntry { base, gamma_level };
    let overlapping = ExperimentConfig {
        suite: vec![entry(BaseFunction::Elliptic, 3), entry(BaseFunction::Schwefel, 3)],
        algorithms: vec![Algorithm::Hcc, Algorithm::CcRddsm],
        runs: Some(5),
        tfes: Some(100_000),
        scale: Scale::Mini,
        seed0: SEED0,
        output_dir: tmp.path().join("overlapping"),
        workers: None,
    };
    let disjoint = ExperimentConfig {
        suite: vec![
            entry(BaseFunction::Elliptic, 1),
            entry(BaseFunction::Schwefel, 1),
            entry(BaseFunction::Rastrigin, 1),
            entry(BaseFunction::Ackley, 1),
        ],
        algorithms: vec![Algorithm::CcRddsm, Algorithm::CcRandom],
        output_dir: tmp.path().join("disjoint"),
        ..overlapping.clone()
    };
    let a = run_experiment(&overlapping).unwrap();
    let b = run_experiment(&disjoint).unwrap();

    let mut ok = true;
    let mut parts = Vec::new();
    for p in ["E3", "S3"] {
        let h = median(&finals(&a.records, p, Algorithm::Hcc));
        let c = median(&finals(&a.records, p, Algorithm::CcRddsm));
        ok &= h <= c;
        parts.push(format!("{p} hcc {h:.3e} <= cc {c:.3e}"));
    }
    // The decomposition-quality finding is asserted on the same two base
    // functions as above; the other two are reported alongside.
    for p in ["E1", "S1", "R1", "A1"] {
        let c = median(&finals(&b.records, p, Algorithm::CcRddsm));
        let r = median(&finals(&b.records, p, Algorithm::CcRandom));
        let ratio = r / c;
        if p == "E1" || p == "S1" {
            ok &= ratio >= 10.0;
            parts.push(format!("{p} random/rddsm {ratio:.1}x"));
        } else {
            parts.push(format!("{p} random/rddsm {ratio:.1}x (reported)"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 900.0;
    report(8, "mini-scale directional performance", ok, &format!("{}; {secs:.0}s", parts.join(", ")));
    assert!(ok);
}

#[test]
fn criterion_09_optimizer_sanity() {
    let start = Instant::now();
    let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let solved = (0..5u64)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mean0: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
            let cfg = OptimizerConfig::new(mean0, 20_000, Bounds::default(), seed)
                .with_stagnation_window(None);
            cmaes_optimize(sphere, &cfg).unwrap().best_value < 1e-8
        })
        .count();
    let cfg = OptimizerConfig::new(vec![0.0; 10], 1_000_000, Bounds::default(), 0);
    let flat = cmaes_optimize(|_| 42.0, &cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    // One improving first evaluation, then 100 that do not improve.
    let ok = solved >= 4 && flat.fes_used == 101 && flat.stopped_by == StopReason::Stagnation && secs < 30.0;
    report(9, "CMA-ES sphere and stagnation", ok,
        &format!("{solved}/5 seeds < 1e-8, flat run stopped at {} FEs, {secs:.2}s", flat.fes_used));
    assert!(ok);
}

#[test]
fn criterion_10_rank_sum_statistics() {
    let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
    let same = [0.5, 0.25, 8.0, 1.0, 3.0];
    let s = wilcoxon_rank_sum(&same, &same).unwrap();
    let ok = (r.p_value - 0.1).abs() < 1e-15 && s.verdict == Verdict::Similar;
    report(10, "rank-sum exact p and identical-sample verdict", ok,
        &format!("p = {}, identical verdict {}", r.p_value, s.verdict));
    assert!(ok);
}
