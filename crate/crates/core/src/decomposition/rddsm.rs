use std::collections::{BTreeSet, HashSet};

use super::bitset::BitSet;
use super::dsm::DesignStructureMatrix;
use super::groups::Decomposition;
use crate::error::Result;

/// Post-processing switches for [`rddsm_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RddsmOptions {
    /// Drop groups that are strict subsets of another emitted group.
    pub prune_subsets: bool,
}

impl Default for RddsmOptions {
    fn default() -> Self {
        Self { prune_subsets: true }
    }
}

/// Recursive DSM decomposition with default options.
pub fn rddsm(theta: &DesignStructureMatrix) -> Result<Decomposition> {
    rddsm_with(theta, RddsmOptions::default())
}

/// Splits the variables into clique groups of Θ such that every
/// interacting pair shares at least one group.
///
/// For each variable `i` of the current set `V`, its neighbourhood inside
/// `V` is emitted when it forms a clique and otherwise decomposed
/// recursively. A neighbourhood equal to `V` is skipped, and each
/// neighbourhood is recursed into at most once. Output groups are sorted
/// ascending and listed in lexicographic order.
pub fn rddsm_with(theta: &DesignStructureMatrix, options: RddsmOptions) -> Result<Decomposition> {
    theta.validate()?;
    let n = theta.n();
    let mut emitted: HashSet<BitSet> = HashSet::new();
    let mut visited: HashSet<BitSet> = HashSet::new();
    let all = BitSet::full(n);
    visited.insert(all.clone());
    ddsm(theta, &all, &mut emitted, &mut visited);

    let mut groups: Vec<BitSet> = emitted.into_iter().collect();
    if options.prune_subsets {
        let snapshot = groups.clone();
        groups.retain(|g| !snapshot.iter().any(|h| h != g && g.is_subset(h)));
    }
    let ordered: BTreeSet<Vec<usize>> = groups.iter().map(BitSet::to_vec).collect();
    Decomposition::new(n, ordered.into_iter().collect())
}

fn ddsm(
    theta: &DesignStructureMatrix,
    current: &BitSet,
    emitted: &mut HashSet<BitSet>,
    visited: &mut HashSet<BitSet>,
) {
    for i in current.ones() {
        let p = theta.row(i).intersection(current);
        if theta.is_clique_set(&p) {
            emitted.insert(p);
        } else if p != *current && visited.insert(p.clone()) {
            ddsm(theta, &p, emitted, visited);
        }
    }
}
