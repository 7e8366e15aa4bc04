use std::fmt::Write as _;

use super::bitset::BitSet;
use crate::error::{Error, Result};

/// Symmetric boolean variable-interaction matrix with an all-1 diagonal.
/// Row `i` lists the variables `i` interacts with (itself included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignStructureMatrix {
    n: usize,
    rows: Vec<BitSet>,
}

impl DesignStructureMatrix {
    /// Θ = I: no interactions.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitSet::from_indices(n, &[i])).collect();
        Self { n, rows }
    }

    pub fn all_ones(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|_| BitSet::full(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::identity(n);
        for &(p, q) in edges {
            m.set(p, q, true)?;
        }
        Ok(m)
    }

    /// Every pair of variables sharing a group interacts.
    pub fn from_groups(n: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut m = Self::identity(n);
        for g in groups {
            if let Some(&bad) = g.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: bad, dim: n });
            }
            let mask = BitSet::from_indices(n, g);
            for &i in g {
                for (w, b) in m.rows[i].words_mut().iter_mut().zip(mask.words()) {
                    *w |= b;
                }
            }
        }
        Ok(m)
    }

    /// Checks symmetry and the diagonal.
    pub fn from_bool_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut bits = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let mut b = BitSet::new(n);
            for (j, &v) in row.iter().enumerate() {
                if v {
                    b.insert(j);
                }
            }
            bits.push(b);
        }
        let m = Self { n, rows: bits };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if !self.rows[i].contains(i) {
                return Err(Error::InvalidMatrix(format!("diagonal entry {i} is zero")));
            }
            for j in self.rows[i].ones() {
                if !self.rows[j].contains(i) {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric: entry ({i},{j}) is 1 but ({j},{i}) is 0"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: usize, q: usize) -> bool {
        self.rows[p].contains(q)
    }

    /// Sets Θ[p,q] and Θ[q,p]. Diagonal entries are fixed at 1.
    pub fn set(&mut self, p: usize, q: usize, value: bool) -> Result<()> {
        for i in [p, q] {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, dim: self.n });
            }
        }
        if p == q {
            if !value {
                return Err(Error::InvalidMatrix("diagonal entries must be 1".into()));
            }
            return Ok(());
        }
        if value {
            self.rows[p].insert(q);
            self.rows[q].insert(p);
        } else {
            self.rows[p].remove(q);
            self.rows[q].remove(p);
        }
        Ok(())
    }

    /// Variables interacting with `i`, `i` included, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.rows[i].to_vec()
    }

    /// Off-diagonal 1-entries as `(p, q)` with `p < q`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|p| self.rows[p].ones().filter(move |&q| q > p).map(move |q| (p, q)))
            .collect()
    }

    /// True when the principal submatrix on `indices` is all 1.
    pub fn is_clique(&self, indices: &[usize]) -> bool {
        let mask = BitSet::from_indices(self.n, indices);
        self.is_clique_set(&mask)
    }

    pub(crate) fn is_clique_set(&self, set: &BitSet) -> bool {
        set.ones().all(|i| set.is_subset(&self.rows[i]))
    }

    pub(crate) fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    /// Text form: `n` on the first line, then `n` lines of `0`/`1`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1) + 8);
        writeln!(s, "{}", self.n).unwrap();
        for row in &self.rows {
            for j in 0..self.n {
                s.push(if row.contains(j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("DSM file", "empty input"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse("DSM file", format!("bad size line `{header}`")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse("DSM file", format!("expected {n} rows, found {i}")))?;
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::parse(
                        "DSM file",
                        format!("row {i}: unexpected character `{other}`"),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::parse("DSM file", format!("more than {n} rows")));
        }
        Self::from_bool_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_produce_blocks() {
        let m = DesignStructureMatrix::from_groups(5, &[vec![0, 1], vec![1, 2, 3]]).unwrap();
        assert!(m.get(0, 1) && m.get(1, 3) && m.get(3, 2));
        assert!(!m.get(0, 2) && !m.get(4, 0));
        assert_eq!(m.neighbors(1), vec![0, 1, 2, 3]);
        assert_eq!(m.neighbors(4), vec![4]);
        assert_eq!(m.edges(), vec![(0, 1), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn rejects_asymmetric_or_zero_diagonal() {
        let asym = vec![vec![true, true], vec![false, true]];
        assert!(matches!(
            DesignStructureMatrix::from_bool_rows(&asym),
            Err(Error::InvalidMatrix(_))
        ));
        let zero_diag = vec![vec![false, false], vec![false, true]];
        assert!(DesignStructureMatrix::from_bool_rows(&zero_diag).is_err());
        let mut m = DesignStructureMatrix::identity(3);
        assert!(m.set(1, 1, false).is_err());
        assert!(m.set(0, 3, true).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let m = DesignStructureMatrix::from_edges(4, &[(0, 3), (1, 2)]).unwrap();
        let text = m.to_text();
        assert_eq!(text, "4\n1001\n0110\n0110\n1001\n");
        assert_eq!(DesignStructureMatrix::parse_text(&text).unwrap(), m);
        assert!(DesignStructureMatrix::parse_text("3\n111\n111\n").is_err());
        assert!(DesignStructureMatrix::parse_text("2\n1x\n01\n").is_err());
        assert!(DesignStructureMatrix::parse_text("2\n10\n11\n").is_err());
        assert!(DesignStructureMatrix::parse_text("").is_err());
    }

    #[test]
    fn clique_check() {
        let m = DesignStructureMatrix::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(m.is_clique(&[0, 1, 2]));
        assert!(!m.is_clique(&[0, 2, 3]));
        assert!(m.is_clique(&[3]));
    }
}
