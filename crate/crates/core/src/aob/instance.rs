use std::ops::Range;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::base::BaseFunction;
use super::sampling::{permutation, BoxMuller};
use super::transform::{t_asy_in_place, t_osz_in_place};
use crate::bounds::Bounds;
use crate::decomposition::{Decomposition, DesignStructureMatrix};
use crate::error::{Error, Result};
use crate::problem::Problem;

/// Block sizes of the standard 1000-dimensional layout.
pub const DEFAULT_SUBSPACE_SIZES: [usize; 20] = [
    50, 50, 25, 25, 100, 100, 25, 25, 50, 25, 100, 25, 100, 50, 25, 25, 25, 100, 50, 25,
];

/// Per-boundary overlap of the six preset levels.
pub const GAMMA_LEVELS: [usize; 6] = [0, 1, 3, 5, 7, 10];

/// Asymmetry strength used when building `z_i`.
pub const ASYMMETRY_BETA: f64 = 0.2;

/// Half-width of the box the optimum shift is drawn from.
pub const SHIFT_RANGE: f64 = 80.0;

/// Overlap list for preset `level` (1..=6) on the default 20-block layout.
pub fn gamma_preset(level: u8) -> Result<Vec<usize>> {
    gamma_preset_for(level, DEFAULT_SUBSPACE_SIZES.len())
}

pub fn gamma_preset_for(level: u8, blocks: usize) -> Result<Vec<usize>> {
    if !(1..=6).contains(&level) {
        return Err(Error::GammaLevel(level));
    }
    Ok(vec![GAMMA_LEVELS[level as usize - 1]; blocks.saturating_sub(1)])
}

/// Default block sizes scaled by 1/10. Boundaries are rounded from the
/// cumulative sums, so the total stays exactly D/10.
pub fn mini_subspace_sizes() -> Vec<usize> {
    let mut sizes = Vec::with_capacity(DEFAULT_SUBSPACE_SIZES.len());
    let mut cum = 0usize;
    let mut prev = 0usize;
    for &s in &DEFAULT_SUBSPACE_SIZES {
        cum += s;
        let boundary = (cum as f64 / 10.0).round() as usize;
        sizes.push(boundary - prev);
        prev = boundary;
    }
    sizes
}

/// Caps each overlap at one less than the smaller adjacent block.
pub fn cap_overlaps(sizes: &[usize], overlaps: &[usize]) -> Vec<usize> {
    overlaps
        .iter()
        .enumerate()
        .map(|(i, &g)| g.min(sizes[i].min(sizes[i + 1]).saturating_sub(1)))
        .collect()
}

/// Everything needed to generate an instance deterministically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub base: BaseFunction,
    #[serde(rename = "s_size")]
    pub subspace_sizes: Vec<usize>,
    #[serde(rename = "gamma")]
    pub overlaps: Vec<usize>,
    pub bounds: Bounds,
    pub seed: u64,
}

impl ProblemSpec {
    /// Full-size spec on the default layout with preset overlap `level`.
    pub fn preset(base: BaseFunction, level: u8, seed: u64) -> Result<Self> {
        Ok(Self {
            base,
            subspace_sizes: DEFAULT_SUBSPACE_SIZES.to_vec(),
            overlaps: gamma_preset(level)?,
            bounds: Bounds::default(),
            seed,
        })
    }

    /// D = 100 variant with overlaps capped to fit the smaller blocks.
    pub fn mini_preset(base: BaseFunction, level: u8, seed: u64) -> Result<Self> {
        let sizes = mini_subspace_sizes();
        let overlaps = cap_overlaps(&sizes, &gamma_preset_for(level, sizes.len())?);
        Ok(Self {
            base,
            subspace_sizes: sizes,
            overlaps,
            bounds: Bounds::default(),
            seed,
        })
    }

    pub fn dimension(&self) -> usize {
        self.subspace_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = &self.subspace_sizes;
        if sizes.is_empty() {
            return Err(Error::InvalidSpec("no subspace sizes".into()));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSpec(format!("subspace size {i} is zero")));
        }
        if self.overlaps.len() != sizes.len() - 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} overlap entries, got {}",
                sizes.len() - 1,
                self.overlaps.len()
            )));
        }
        for (i, &g) in self.overlaps.iter().enumerate() {
            let limit = sizes[i].min(sizes[i + 1]);
            if g >= limit {
                return Err(Error::InvalidSpec(format!(
                    "overlap {g} between blocks {i} and {} must be below {limit}",
                    i + 1
                )));
            }
        }
        let min_dim = self.base.min_dim();
        if let Some(i) = sizes.iter().position(|&s| s < min_dim) {
            return Err(Error::InvalidSpec(format!(
                "{} needs at least {min_dim} variables per subspace (block {i})",
                self.base
            )));
        }
        if !self.bounds.is_valid() {
            return Err(Error::InvalidSpec("bounds must be finite with lower < upper".into()));
        }
        if self.bounds.lower >= -SHIFT_RANGE || self.bounds.upper <= SHIFT_RANGE {
            return Err(Error::InvalidSpec(format!(
                "bounds must strictly contain [-{SHIFT_RANGE}, {SHIFT_RANGE}]"
            )));
        }
        Ok(())
    }

    /// Index windows into the permutation, one per subspace. Subspace `i > 0`
    /// reaches `overlaps[i-1]` positions back into block `i-1`.
    pub fn windows(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.subspace_sizes.len());
        let mut start = 0;
        for (i, &s) in self.subspace_sizes.iter().enumerate() {
            let back = if i == 0 { 0 } else { self.overlaps[i - 1] };
            out.push(start - back..start + s);
            start += s;
        }
        out
    }

    /// Problem id: function letter followed by the overlap level, when the
    /// overlaps match a (possibly capped) preset.
    pub fn problem_id(&self) -> Option<String> {
        (1..=6u8).find_map(|level| {
            let preset = gamma_preset_for(level, self.subspace_sizes.len()).ok()?;
            let capped = cap_overlaps(&self.subspace_sizes, &preset);
            (capped == self.overlaps || preset == self.overlaps)
                .then(|| format!("{}{level}", self.base.letter()))
        })
    }
}

/// Square orthogonal matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    side: usize,
    data: Vec<f64>,
}

impl Rotation {
    pub fn identity(side: usize) -> Self {
        let mut data = vec![0.0; side * side];
        for i in 0..side {
            data[i * side + i] = 1.0;
        }
        Self { side, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let side = rows.len();
        if rows.iter().any(|r| r.len() != side) {
            return Err(Error::parse("rotation", "matrix is not square"));
        }
        Ok(Self {
            side,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
    /// signs of R's diagonal folded into Q.
    fn haar<R: Rng>(side: usize, gauss: &mut BoxMuller<'_, R>) -> Self {
        let mut entries = Vec::with_capacity(side * side);
        for _ in 0..side * side {
            entries.push(gauss.next());
        }
        let g = DMatrix::from_row_slice(side, side, &entries);
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..side {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        let mut data = Vec::with_capacity(side * side);
        for i in 0..side {
            for j in 0..side {
                data.push(q[(i, j)]);
            }
        }
        Self { side, data }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.side.max(1))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.side + j]
    }

    /// `out = R x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.rows()) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// max |(RᵀR − I)_{ij}|
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.side;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += self.get(k, i) * self.get(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// A fully materialised benchmark problem. Immutable once generated.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub(crate) spec: ProblemSpec,
    pub(crate) permutation: Vec<usize>,
    pub(crate) subspaces: Vec<Vec<usize>>,
    pub(crate) shift: Vec<f64>,
    pub(crate) weights: Vec<f64>,
    pub(crate) rotations: Vec<Rotation>,
}

impl ProblemInstance {
    /// Draws, in order from one ChaCha8 stream seeded with `spec.seed`: the
    /// permutation (Fisher–Yates), the shift (uniform on ±80), the weights
    /// (`10^{3g}`, Box–Muller) and one Haar rotation per subspace. The first
    /// three do not depend on the overlaps, so specs differing only in
    /// overlap share them.
    pub fn generate(spec: &ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let dim = spec.dimension();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

        let permutation = permutation(&mut rng, dim);
        let shift: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-SHIFT_RANGE..SHIFT_RANGE))
            .collect();

        let subspaces = spec
            .windows()
            .into_iter()
            .map(|w| permutation[w].to_vec())
            .collect::<Vec<_>>();

        let mut gauss = BoxMuller::new(&mut rng);
        let weights = (0..spec.subspace_sizes.len())
            .map(|_| 10f64.powf(3.0 * gauss.next()))
            .collect();
        let rotations = subspaces
            .iter()
            .map(|s| Rotation::haar(s.len(), &mut gauss))
            .collect();

        Ok(Self {
            spec: spec.clone(),
            permutation,
            subspaces,
            shift,
            weights,
            rotations,
        })
    }

    /// Assembles an instance from explicit parts and checks every structural
    /// invariant. Used by the loader and by tests that need neutral weights
    /// or rotations.
    pub fn from_parts(
        spec: ProblemSpec,
        permutation: Vec<usize>,
        shift: Vec<f64>,
        weights: Vec<f64>,
        rotations: Vec<Rotation>,
    ) -> Result<Self> {
        spec.validate()?;
        let dim = spec.dimension();
        check_len("permutation", dim, permutation.len())?;
        check_len("shift", dim, shift.len())?;
        check_len("weights", spec.subspace_sizes.len(), weights.len())?;
        check_len("rotations", spec.subspace_sizes.len(), rotations.len())?;

        let mut seen = vec![false; dim];
        for &p in &permutation {
            if p >= dim || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidSpec("permutation is not a bijection".into()));
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidSpec("weights must be positive and finite".into()));
        }
        if shift.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("shift must be finite".into()));
        }
        let subspaces: Vec<Vec<usize>> = spec
            .windows()
            .into_iter()
            .map(|w| permutation[w].to_vec())
            .collect();
        for (i, (s, r)) in subspaces.iter().zip(&rotations).enumerate() {
            if r.side() != s.len() {
                return Err(Error::InvalidSpec(format!(
                    "rotation {i} has side {} but subspace has {} variables",
                    r.side(),
                    s.len()
                )));
            }
        }
        Ok(Self {
            spec,
            permutation,
            subspaces,
            shift,
            weights,
            rotations,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.shift.len()
    }

    pub fn base(&self) -> BaseFunction {
        self.spec.base
    }

    pub fn bounds(&self) -> Bounds {
        self.spec.bounds
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Subspace index lists in construction (permutation) order.
    pub fn subspaces(&self) -> &[Vec<usize>] {
        &self.subspaces
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn in_bounds(&self, x: &[f64]) -> bool {
        x.len() == self.dimension() && self.spec.bounds.contains(x)
    }

    /// Objective value at `x`. Points outside the box are evaluated without
    /// penalty; use [`in_bounds`](Self::in_bounds) to flag them.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        let max_len = self.subspaces.iter().map(Vec::len).max().unwrap_or(0);
        let mut y = vec![0.0; max_len];
        let mut z = vec![0.0; max_len];
        let mut total = 0.0;
        for ((indices, rot), &w) in self.subspaces.iter().zip(&self.rotations).zip(&self.weights) {
            let n = indices.len();
            let (y, z) = (&mut y[..n], &mut z[..n]);
            for (dst, &idx) in y.iter_mut().zip(indices) {
                *dst = x[idx] - self.shift[idx];
            }
            rot.apply(y, z);
            t_osz_in_place(z);
            t_asy_in_place(z, ASYMMETRY_BETA);
            total += w * self.spec.base.eval(z);
        }
        total
    }

    /// Θ with a 1 for every pair that shares a subspace (and the diagonal).
    pub fn ground_truth_theta(&self) -> DesignStructureMatrix {
        DesignStructureMatrix::from_groups(self.dimension(), &self.subspaces)
            .expect("subspace indices are within the dimension")
    }

    /// Subspaces as a canonical decomposition.
    pub fn true_subspaces(&self) -> Decomposition {
        Decomposition::new(self.dimension(), self.subspaces.clone())
            .expect("subspaces cover the dimension and are distinct")
    }
}

impl Problem for ProblemInstance {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn bounds(&self) -> Bounds {
        self.spec.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.evaluate_unchecked(x)
    }
}

fn check_len(what: &str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::InvalidSpec(format!(
            "{what} has length {actual}, expected {expected}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(level: u8) -> ProblemSpec {
        ProblemSpec::preset(BaseFunction::Elliptic, level, 42).unwrap()
    }

    #[test]
    fn default_sizes_sum_to_1000() {
        assert_eq!(DEFAULT_SUBSPACE_SIZES.iter().sum::<usize>(), 1000);
        assert_eq!(&DEFAULT_SUBSPACE_SIZES[..6], &[50, 50, 25, 25, 100, 100]);
    }

    #[test]
    fn presets() {
        assert_eq!(gamma_preset(1).unwrap(), vec![0; 19]);
        assert_eq!(gamma_preset(3).unwrap(), vec![3; 19]);
        assert_eq!(gamma_preset(6).unwrap(), vec![10; 19]);
        assert!(matches!(gamma_preset(0), Err(Error::GammaLevel(0))));
        assert!(matches!(gamma_preset(7), Err(Error::GammaLevel(7))));
    }

    #[test]
    fn mini_sizes_sum_to_100() {
        let s = mini_subspace_sizes();
        assert_eq!(s.iter().sum::<usize>(), 100);
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|&v| v >= 2));
    }

    #[test]
    fn windows_extend_backwards() {
        let w = spec(3).windows();
        assert_eq!(w[0], 0..50);
        assert_eq!(w[1], 47..100);
        assert_eq!(w[1].len(), 53);
        assert_eq!(w[19].end, 1000);
    }

    #[test]
    fn disjoint_preset_gives_table_sizes() {
        let inst = ProblemInstance::generate(&spec(1)).unwrap();
        let sizes: Vec<usize> = inst.subspaces().iter().map(Vec::len).collect();
        assert_eq!(sizes, DEFAULT_SUBSPACE_SIZES.to_vec());
    }

    #[test]
    fn rejects_oversized_overlap() {
        let mut s = spec(1);
        s.overlaps[2] = 25;
        assert!(matches!(ProblemInstance::generate(&s), Err(Error::InvalidSpec(_))));
        s.overlaps[2] = 24;
        assert!(ProblemInstance::generate(&s).is_ok());
        s.overlaps.pop();
        assert!(ProblemInstance::generate(&s).is_err());
    }

    #[test]
    fn optimum_evaluates_to_zero() {
        for base in BaseFunction::ALL {
            let s = ProblemSpec::mini_preset(base, 4, 3).unwrap();
            let inst = ProblemInstance::generate(&s).unwrap();
            let v = inst.evaluate(inst.shift()).unwrap();
            assert!(v.abs() <= 1e-9, "{base}: {v}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let inst = ProblemInstance::generate(&ProblemSpec::mini_preset(BaseFunction::Ackley, 1, 0).unwrap())
            .unwrap();
        assert!(matches!(
            inst.evaluate(&[0.0; 3]),
            Err(Error::DimensionMismatch { expected: 100, actual: 3 })
        ));
    }

    #[test]
    fn shared_components_across_overlap_levels() {
        let a = ProblemInstance::generate(&spec(1)).unwrap();
        let b = ProblemInstance::generate(&spec(5)).unwrap();
        assert_eq!(a.permutation(), b.permutation());
        assert_eq!(a.shift(), b.shift());
        assert_eq!(a.weights(), b.weights());
    }

    #[test]
    fn problem_ids() {
        assert_eq!(spec(3).problem_id().as_deref(), Some("E3"));
        let m = ProblemSpec::mini_preset(BaseFunction::Schwefel, 6, 0).unwrap();
        assert_eq!(m.problem_id().as_deref(), Some("S6"));
    }
}
