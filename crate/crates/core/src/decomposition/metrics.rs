use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dsm::DesignStructureMatrix;
use super::groups::Decomposition;
use crate::aob::sampling::permutation;
use crate::error::{Error, Result};

/// Decomposition accuracy against a ground truth.
///
/// Each true group is credited with its largest intersection with any found
/// group, and the credits are normalised by the total size of the true
/// groups. For a disjoint truth that total is `d`; for an overlapping truth
/// the normalisation keeps an exact match at 1.
pub fn accuracy(found: &Decomposition, truth: &Decomposition, d: usize) -> Result<f64> {
    for n in [found.n(), truth.n()] {
        if n != d {
            return Err(Error::DimensionMismatch { expected: d, actual: n });
        }
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (k, g) in found.groups().iter().enumerate() {
        for &i in g {
            owners[i].push(k);
        }
    }
    let mut credit = 0usize;
    let mut total = 0usize;
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for g in truth.groups() {
        counts.clear();
        for &i in g {
            for &k in &owners[i] {
                *counts.entry(k).or_insert(0) += 1;
            }
        }
        credit += counts.values().copied().max().unwrap_or(0);
        total += g.len();
    }
    Ok(credit as f64 / total as f64)
}

/// Fraction of the `d` variables that belong to two or more groups.
pub fn degree_of_overlap(decomposition: &Decomposition, d: usize) -> Result<f64> {
    Ok(overlap_count(decomposition, d)? as f64 / d as f64)
}

/// Number of variables that belong to two or more groups.
pub fn overlap_count(decomposition: &Decomposition, d: usize) -> Result<usize> {
    if decomposition.n() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: decomposition.n(),
        });
    }
    let mut hits = vec![0u32; d];
    for g in decomposition.groups() {
        for &i in g {
            hits[i] += 1;
        }
    }
    Ok(hits.iter().filter(|&&h| h >= 2).count())
}

/// Random disjoint grouping of `0..d` into `k` groups of `d / k`
/// variables, the remainder going to the last group.
pub fn random_decomposition(d: usize, k: usize, seed: u64) -> Result<Decomposition> {
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!(
            "cannot split {d} variables into {k} non-empty groups"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perm = permutation(&mut rng, d);
    let size = d / k;
    let groups = (0..k)
        .map(|g| {
            let end = if g + 1 == k { d } else { (g + 1) * size };
            perm[g * size..end].to_vec()
        })
        .collect();
    Decomposition::new(d, groups)
}

/// Result of [`is_ideal_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealReport {
    /// Every group induces an all-1 submatrix of Θ.
    pub all_groups_cliques: bool,
    /// Every off-diagonal 1-entry of Θ lies inside some group.
    pub all_edges_covered: bool,
}

impl IdealReport {
    pub fn is_ideal(&self) -> bool {
        self.all_groups_cliques && self.all_edges_covered
    }
}

pub fn is_ideal_decomposition(
    decomposition: &Decomposition,
    theta: &DesignStructureMatrix,
) -> Result<IdealReport> {
    if decomposition.n() != theta.n() {
        return Err(Error::DimensionMismatch {
            expected: theta.n(),
            actual: decomposition.n(),
        });
    }
    let all_groups_cliques = decomposition.groups().iter().all(|g| theta.is_clique(g));
    let mut covered = DesignStructureMatrix::identity(theta.n());
    for g in decomposition.groups() {
        for (a, &p) in g.iter().enumerate() {
            for &q in &g[a + 1..] {
                covered.set(p, q, true)?;
            }
        }
    }
    let all_edges_covered = theta.edges().into_iter().all(|(p, q)| covered.get(p, q));
    Ok(IdealReport {
        all_groups_cliques,
        all_edges_covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(n: usize, g: &[&[usize]]) -> Decomposition {
        Decomposition::new(n, g.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn accuracy_values() {
        let truth = dec(6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert_eq!(accuracy(&truth, &truth, 6).unwrap(), 1.0);
        let singles = dec(6, &[&[0], &[1], &[2], &[3], &[4], &[5]]);
        assert!((accuracy(&singles, &truth, 6).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        let half = dec(6, &[&[0, 1, 3], &[2, 4, 5]]);
        assert!((accuracy(&half, &truth, 6).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert!(accuracy(&truth, &singles, 5).is_err());
    }

    #[test]
    fn accuracy_overlapping_truth() {
        let truth = dec(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(accuracy(&truth, &truth, 5).unwrap(), 1.0);
    }

    #[test]
    fn overlap_degree() {
        let d = dec(6, &[&[0, 1, 2], &[2, 3], &[3, 4, 5]]);
        assert_eq!(overlap_count(&d, 6).unwrap(), 2);
        assert!((degree_of_overlap(&d, 6).unwrap() - 2.0 / 6.0).abs() < 1e-15);
        assert!(degree_of_overlap(&d, 7).is_err());
    }

    #[test]
    fn random_grouping_shapes() {
        let d = random_decomposition(10, 3, 7).unwrap();
        let sizes: Vec<usize> = d.groups().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 3, 4]);
        assert_eq!(degree_of_overlap(&d, 10).unwrap(), 0.0);
        assert_eq!(d, random_decomposition(10, 3, 7).unwrap());
        assert!(random_decomposition(3, 4, 0).is_err());
        assert!(random_decomposition(3, 0, 0).is_err());
    }

    #[test]
    fn ideal_report() {
        let theta = DesignStructureMatrix::from_groups(4, &[vec![0, 1], vec![1, 2, 3]]).unwrap();
        let good = dec(4, &[&[0, 1], &[1, 2, 3]]);
        assert!(is_ideal_decomposition(&good, &theta).unwrap().is_ideal());
        let merged = dec(4, &[&[0, 1, 2, 3]]);
        let r = is_ideal_decomposition(&merged, &theta).unwrap();
        assert!(!r.all_groups_cliques && r.all_edges_covered);
        let split = dec(4, &[&[0, 1], &[1, 2], &[3]]);
        let r = is_ideal_decomposition(&split, &theta).unwrap();
        assert!(r.all_groups_cliques && !r.all_edges_covered);
    }
}
