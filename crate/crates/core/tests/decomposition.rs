use hcc_core::decomposition::{
    accuracy, degree_of_overlap, is_ideal_decomposition, random_decomposition, rddsm,
    rddsm_with, Decomposition, DesignStructureMatrix, RddsmOptions,
};
use hcc_core::{BaseFunction, ProblemInstance, ProblemSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(n: usize, p: f64, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
        for j in i + 1..n {
            let e = rng.random_bool(p);
            m[i][j] = e;
            m[j][i] = e;
        }
    }
    m
}

/// Checks the decomposition contract against the raw boolean matrix.
fn check_contract(m: &[Vec<bool>], groups: &[Vec<usize>]) -> Result<(), String> {
    let n = m.len();
    for g in groups {
        for &p in g {
            for &q in g {
                if !m[p][q] {
                    return Err(format!("group {g:?} is not a clique at ({p},{q})"));
                }
            }
        }
    }
    for v in 0..n {
        if !groups.iter().any(|g| g.contains(&v)) {
            return Err(format!("variable {v} uncovered"));
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            if m[p][q] && !groups.iter().any(|g| g.contains(&p) && g.contains(&q)) {
                return Err(format!("edge ({p},{q}) uncovered"));
            }
        }
    }
    for (a, g) in groups.iter().enumerate() {
        if groups[a + 1..].contains(g) {
            return Err(format!("duplicate group {g:?}"));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn rddsm_contract_on_random_matrices(
        n in 1usize..=12,
        p in prop::sample::select(vec![0.2, 0.5, 0.8]),
        seed in any::<u64>(),
        prune in any::<bool>(),
    ) {
        let m = random_matrix(n, p, seed);
        let theta = DesignStructureMatrix::from_bool_rows(&m).unwrap();
        let d = rddsm_with(&theta, RddsmOptions { prune_subsets: prune }).unwrap();
        if let Err(e) = check_contract(&m, d.groups()) {
            return Err(TestCaseError::fail(e));
        }
        prop_assert!(is_ideal_decomposition(&d, &theta).unwrap().is_ideal());
        let mut canon = d.groups().to_vec();
        canon.sort();
        prop_assert_eq!(canon, d.groups().to_vec());
    }

    #[test]
    fn accuracy_bounds(n in 2usize..40, k in 1usize..6, seed in any::<u64>()) {
        let k = k.min(n);
        let truth = random_decomposition(n, k, seed).unwrap();
        let found = random_decomposition(n, (k + 1).min(n), seed ^ 7).unwrap();
        let acc = accuracy(&found, &truth, n).unwrap();
        let total: usize = truth.groups().iter().map(Vec::len).sum();
        prop_assert!(acc <= 1.0);
        prop_assert!(acc >= truth.len() as f64 / total as f64);
        prop_assert_eq!(accuracy(&truth, &truth, n).unwrap(), 1.0);
    }

    #[test]
    fn overlap_degree_ignores_group_order(seed in any::<u64>()) {
        let spec = ProblemSpec::mini_preset(BaseFunction::Schwefel, 4, seed).unwrap();
        let inst = ProblemInstance::generate(&spec).unwrap();
        let truth = inst.true_subspaces();
        let mut groups = truth.groups().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..groups.len()).rev() {
            groups.swap(i, rng.random_range(0..=i));
        }
        let shuffled = Decomposition::new(100, groups).unwrap();
        prop_assert_eq!(
            degree_of_overlap(&shuffled, 100).unwrap(),
            degree_of_overlap(&truth, 100).unwrap()
        );
    }
}

#[test]
fn path_graph_terminates() {
    for n in [2, 3, 12, 64, 200] {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let d = rddsm(&DesignStructureMatrix::from_edges(n, &edges).unwrap()).unwrap();
        assert_eq!(d.len(), n - 1);
    }
}

#[test]
fn block_diagonal_gives_blocks() {
    let blocks = vec![vec![0, 4, 7], vec![1, 2], vec![3, 5, 6, 8], vec![9]];
    let theta = DesignStructureMatrix::from_groups(10, &blocks).unwrap();
    let d = rddsm(&theta).unwrap();
    let mut expect = blocks.clone();
    expect.sort();
    assert_eq!(d.groups(), &expect[..]);
}

#[test]
fn recovers_instance_structure_from_estimated_matrix() {
    // A small disjoint instance: finite differences recover the blocks.
    let spec = ProblemSpec {
        base: BaseFunction::Elliptic,
        subspace_sizes: vec![3, 4, 2],
        overlaps: vec![0, 0],
        bounds: Default::default(),
        seed: 5,
    };
    let inst = ProblemInstance::generate(&spec).unwrap();
    let f = |x: &[f64]| inst.evaluate(x).unwrap();
    let (theta, fes) =
        hcc_core::decomposition::estimate_theta(f, &vec![0.0; 9], 10.0, None).unwrap();
    assert_eq!(fes, 1 + 9 + 36);
    assert_eq!(theta, inst.ground_truth_theta());
}

#[test]
fn random_grouping_on_overlapping_truth_is_below_one() {
    let spec = ProblemSpec::preset(BaseFunction::Ackley, 6, 2).unwrap();
    let inst = ProblemInstance::generate(&spec).unwrap();
    let truth = inst.true_subspaces();
    let acc = accuracy(&random_decomposition(1000, 20, 3).unwrap(), &truth, 1000).unwrap();
    assert!(acc > 0.0 && acc < 0.5);
    let found = rddsm(&inst.ground_truth_theta()).unwrap();
    assert_eq!(accuracy(&found, &truth, 1000).unwrap(), 1.0);
}
