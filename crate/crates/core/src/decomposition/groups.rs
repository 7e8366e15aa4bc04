use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered list of variable groups covering `0..n`.
///
/// Groups are stored sorted ascending and may overlap. Group order is kept
/// as given since the cooperative loops visit subspaces in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    n: usize,
    groups: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Fails on empty or out-of-range groups, repeated groups, repeated
    /// indices inside a group, or incomplete coverage of `0..n`.
    pub fn new(n: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen_groups = HashSet::new();
        let mut covered = vec![false; n];
        let mut sorted = Vec::with_capacity(groups.len());
        for (gi, mut g) in groups.into_iter().enumerate() {
            if g.is_empty() {
                return Err(Error::InvalidDecomposition(format!("group {gi} is empty")));
            }
            g.sort_unstable();
            if g.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDecomposition(format!(
                    "group {gi} repeats an index"
                )));
            }
            if let Some(&bad) = g.last().filter(|&&last| last >= n) {
                return Err(Error::IndexOutOfRange { index: bad, dim: n });
            }
            for &i in &g {
                covered[i] = true;
            }
            if !seen_groups.insert(g.clone()) {
                return Err(Error::InvalidDecomposition(format!(
                    "group {gi} duplicates an earlier group"
                )));
            }
            sorted.push(g);
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidDecomposition(format!(
                "variable {missing} is not covered by any group"
            )));
        }
        Ok(Self { n, groups: sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Same groups sorted lexicographically.
    pub fn canonical(&self) -> Self {
        let mut groups = self.groups.clone();
        groups.sort();
        Self { n: self.n, groups }
    }

    /// Reorders groups so that, where possible, each group is followed by
    /// one it overlaps with. Walks depth-first from a group with the fewest
    /// overlapping neighbours, so a chain of overlaps comes out end to end.
    pub fn overlap_chain_order(&self) -> Self {
        let g = self.groups.len();
        let mut owners: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (k, grp) in self.groups.iter().enumerate() {
            for &i in grp {
                owners[i].push(k);
            }
        }
        let adj: Vec<Vec<usize>> = (0..g)
            .map(|k| {
                let mut nb: Vec<usize> = self.groups[k]
                    .iter()
                    .flat_map(|&i| owners[i].iter().copied())
                    .filter(|&o| o != k)
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect();

        let mut visited = vec![false; g];
        let mut order = Vec::with_capacity(g);
        while order.len() < g {
            let start = (0..g)
                .filter(|&k| !visited[k])
                .min_by_key(|&k| (adj[k].iter().filter(|&&o| !visited[o]).count(), k))
                .expect("an unvisited group remains");
            let mut stack = vec![start];
            while let Some(k) = stack.pop() {
                if visited[k] {
                    continue;
                }
                visited[k] = true;
                order.push(k);
                // Push in reverse so the lowest-index neighbour is visited next.
                for &o in adj[k].iter().rev() {
                    if !visited[o] {
                        stack.push(o);
                    }
                }
            }
        }
        Self {
            n: self.n,
            groups: order.into_iter().map(|k| self.groups[k].clone()).collect(),
        }
    }

    /// One group per line, indices separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            let line: Vec<String> = g.iter().map(usize::to_string).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    pub fn parse_text(text: &str, n: usize) -> Result<Self> {
        Self::new(n, parse_groups(text)?)
    }
}

/// Parses the one-group-per-line format without validating coverage.
pub fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(ln, l)| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        Error::parse(
                            "decomposition file",
                            format!("line {}: bad index `{tok}`", ln + 1),
                        )
                    })
                })
                .collect()
        })
        .collect()
}
