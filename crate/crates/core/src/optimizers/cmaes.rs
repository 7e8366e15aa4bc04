use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::{GenerationRecord, OptimizerConfig, OptimizerRun, StopReason};
use crate::error::{Error, Result};

/// Which covariance model an ES run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    /// Full covariance matrix.
    Cmaes,
    /// Diagonal covariance, linear cost per sample.
    #[default]
    SepCmaes,
}

impl OptimizerKind {
    pub fn optimize<F>(self, objective: F, config: &OptimizerConfig) -> Result<OptimizerRun>
    where
        F: FnMut(&[f64]) -> f64,
    {
        self.optimize_observed(objective, config, |_: &GenerationRecord| {})
    }

    pub fn optimize_observed<F, O>(
        self,
        objective: F,
        config: &OptimizerConfig,
        observer: O,
    ) -> Result<OptimizerRun>
    where
        F: FnMut(&[f64]) -> f64,
        O: FnMut(&GenerationRecord),
    {
        run(self, objective, config, Some(observer))
    }
}

/// Full-covariance CMA-ES.
pub fn cmaes_optimize<F>(objective: F, config: &OptimizerConfig) -> Result<OptimizerRun>
where
    F: FnMut(&[f64]) -> f64,
{
    run(OptimizerKind::Cmaes, objective, config, None::<fn(&GenerationRecord)>)
}

/// Separable (diagonal) CMA-ES.
pub fn sep_cmaes_optimize<F>(objective: F, config: &OptimizerConfig) -> Result<OptimizerRun>
where
    F: FnMut(&[f64]) -> f64,
{
    run(OptimizerKind::SepCmaes, objective, config, None::<fn(&GenerationRecord)>)
}

/// Strategy constants from the standard tutorial defaults.
struct Params {
    lambda: usize,
    weights: Vec<f64>,
    mueff: f64,
    c_sigma: f64,
    d_sigma: f64,
    c_c: f64,
    c1: f64,
    c_mu: f64,
    chi_n: f64,
}

impl Params {
    fn new(n: usize, lambda: usize, separable: bool) -> Self {
        let nf = n as f64;
        let mu = (lambda / 2).max(1);
        let raw: Vec<f64> = (1..=mu)
            .map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - (i as f64).ln())
            .collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let mueff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

        let c_sigma = (mueff + 2.0) / (nf + mueff + 5.0);
        let d_sigma = 1.0 + 2.0 * (((mueff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mueff / nf) / (nf + 4.0 + 2.0 * mueff / nf);
        let mut c1 = 2.0 / ((nf + 1.3).powi(2) + mueff);
        let mut c_mu = (2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nf + 2.0).powi(2) + mueff))
            .min(1.0 - c1);
        if separable {
            // Diagonal learning rates may be raised by (n + 2) / 3.
            let scale = (nf + 2.0) / 3.0;
            c1 = (c1 * scale).min(0.5);
            c_mu = (c_mu * scale).min(1.0 - c1);
        }
        let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Self {
            lambda,
            weights,
            mueff,
            c_sigma,
            d_sigma,
            c_c,
            c1,
            c_mu,
            chi_n,
        }
    }
}

enum Covariance {
    Full {
        c: DMatrix<f64>,
        b: DMatrix<f64>,
        d: DVector<f64>,
        /// FE count at the last eigendecomposition.
        decomposed_at: usize,
    },
    Diagonal {
        c: DVector<f64>,
    },
}

impl Covariance {
    fn new(kind: OptimizerKind, n: usize) -> Self {
        match kind {
            OptimizerKind::Cmaes => Covariance::Full {
                c: DMatrix::identity(n, n),
                b: DMatrix::identity(n, n),
                d: DVector::from_element(n, 1.0),
                decomposed_at: 0,
            },
            OptimizerKind::SepCmaes => Covariance::Diagonal {
                c: DVector::from_element(n, 1.0),
            },
        }
    }

    /// Refreshes `B` and `D` when enough evaluations have passed since the
    /// last decomposition, keeping the cost amortised to O(n²) per sample.
    fn refresh(&mut self, fes: usize, params: &Params, force: bool) {
        if let Covariance::Full {
            c,
            b,
            d,
            decomposed_at,
        } = self
        {
            let n = c.nrows() as f64;
            let gap = params.lambda as f64 / (params.c1 + params.c_mu) / n / 10.0;
            if !force && ((fes - *decomposed_at) as f64) < gap {
                return;
            }
            *decomposed_at = fes;
            let eig = SymmetricEigen::new(c.clone());
            let max = eig.eigenvalues.max().max(f64::MIN_POSITIVE);
            let floor = max * 1e-20;
            *b = eig.eigenvectors;
            *d = eig.eigenvalues.map(|v| v.max(floor).sqrt());
        }
    }

    /// `y = C^{1/2} z`
    fn transform(&self, z: &DVector<f64>) -> DVector<f64> {
        match self {
            Covariance::Full { b, d, .. } => b * z.component_mul(d),
            Covariance::Diagonal { c } => z.component_mul(&c.map(f64::sqrt)),
        }
    }

    /// `C^{-1/2} y`
    fn whiten(&self, y: &DVector<f64>) -> DVector<f64> {
        match self {
            Covariance::Full { b, d, .. } => b * (b.tr_mul(y)).component_div(d),
            Covariance::Diagonal { c } => y.component_div(&c.map(f64::sqrt)),
        }
    }

    fn update(
        &mut self,
        params: &Params,
        pc: &DVector<f64>,
        hsig: bool,
        ys: &[&DVector<f64>],
    ) {
        let hs_term = if hsig {
            0.0
        } else {
            params.c_c * (2.0 - params.c_c)
        };
        let keep = 1.0 - params.c1 - params.c_mu + params.c1 * hs_term;
        match self {
            Covariance::Full { c, .. } => {
                let n = c.nrows();
                *c *= keep;
                c.ger(params.c1, pc, pc, 1.0);
                for (w, y) in params.weights.iter().zip(ys) {
                    c.ger(params.c_mu * w, y, y, 1.0);
                }
                // Re-symmetrise against rounding drift.
                for i in 0..n {
                    for j in 0..i {
                        let v = 0.5 * (c[(i, j)] + c[(j, i)]);
                        c[(i, j)] = v;
                        c[(j, i)] = v;
                    }
                }
            }
            Covariance::Diagonal { c } => {
                for i in 0..c.len() {
                    let rank_mu: f64 = params
                        .weights
                        .iter()
                        .zip(ys)
                        .map(|(w, y)| w * y[i] * y[i])
                        .sum();
                    c[i] = keep * c[i] + params.c1 * pc[i] * pc[i] + params.c_mu * rank_mu;
                }
            }
        }
    }

    fn min_eigenvalue(&self) -> f64 {
        match self {
            Covariance::Full { c, .. } => c.clone().symmetric_eigenvalues().min(),
            Covariance::Diagonal { c } => c.min(),
        }
    }
}

fn run<F, O>(
    kind: OptimizerKind,
    mut objective: F,
    config: &OptimizerConfig,
    mut observer: Option<O>,
) -> Result<OptimizerRun>
where
    F: FnMut(&[f64]) -> f64,
    O: FnMut(&GenerationRecord),
{
    config.validate()?;
    let n = config.dim;
    let params = Params::new(n, config.lambda, kind == OptimizerKind::SepCmaes);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cov = Covariance::new(kind, n);

    let mut mean = DVector::from_column_slice(&config.mean0);
    let mut sigma = config.sigma0;
    let mut p_sigma = DVector::zeros(n);
    let mut p_c = DVector::zeros(n);

    let mut best_point = config.mean0.clone();
    let mut best_value = f64::INFINITY;
    let mut fes = 0usize;
    let mut since_improvement = 0usize;
    let mut generation = 0usize;
    let mut stop: Option<StopReason> = None;

    let mut xs: Vec<DVector<f64>> = Vec::with_capacity(params.lambda);
    let mut fs: Vec<f64> = Vec::with_capacity(params.lambda);

    while stop.is_none() {
        let remaining = config.budget - fes;
        let count = remaining.min(params.lambda);
        cov.refresh(fes, &params, generation == 0);
        xs.clear();
        fs.clear();
        for _ in 0..count {
            let z = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            let mut x = &mean + cov.transform(&z) * sigma;
            config.bounds.clamp(x.as_mut_slice());
            let f = objective(x.as_slice());
            fes += 1;
            if !f.is_finite() {
                return Err(Error::NonFinite { value: f, fes });
            }
            if f < best_value {
                best_value = f;
                best_point.copy_from_slice(x.as_slice());
                since_improvement = 0;
            } else {
                since_improvement += 1;
            }
            xs.push(x);
            fs.push(f);
            if config.target.is_some_and(|t| best_value <= t) {
                stop = Some(StopReason::Target);
            } else if config
                .stagnation_window
                .is_some_and(|w| since_improvement >= w)
            {
                stop = Some(StopReason::Stagnation);
            } else if fes == config.budget {
                stop = Some(StopReason::Budget);
            }
            if stop.is_some() {
                break;
            }
        }

        // Only complete generations update the distribution.
        if xs.len() == params.lambda {
            let mut order: Vec<usize> = (0..xs.len()).collect();
            order.sort_by(|&a, &b| fs[a].total_cmp(&fs[b]));
            // Steps are taken from the clamped points actually evaluated.
            let ys: Vec<DVector<f64>> = order[..params.weights.len()]
                .iter()
                .map(|&k| (&xs[k] - &mean) / sigma)
                .collect();
            let mut y_w = DVector::zeros(n);
            for (w, y) in params.weights.iter().zip(&ys) {
                y_w.axpy(*w, y, 1.0);
            }
            mean.axpy(sigma, &y_w, 1.0);

            let cs = params.c_sigma;
            p_sigma *= 1.0 - cs;
            p_sigma.axpy((cs * (2.0 - cs) * params.mueff).sqrt(), &cov.whiten(&y_w), 1.0);
            let norm_ps = p_sigma.norm();
            let decay = 1.0 - (1.0 - cs).powi(2 * (generation as i32 + 1));
            let hsig = norm_ps / decay.sqrt() / params.chi_n < 1.4 + 2.0 / (n as f64 + 1.0);
            let cc = params.c_c;
            p_c *= 1.0 - cc;
            if hsig {
                p_c.axpy((cc * (2.0 - cc) * params.mueff).sqrt(), &y_w, 1.0);
            }
            let refs: Vec<&DVector<f64>> = ys.iter().collect();
            cov.update(&params, &p_c, hsig, &refs);
            // The exponent is capped so a clamped, distorted step cannot blow σ up.
            let exponent = (cs / params.d_sigma * (norm_ps / params.chi_n - 1.0)).min(1.0);
            sigma *= exponent.exp();
        }
        generation += 1;

        if let Some(obs) = observer.as_mut() {
            obs(&GenerationRecord {
                generation,
                fes,
                best_value,
                sigma,
                min_eigenvalue: cov.min_eigenvalue(),
            });
        }
    }

    Ok(OptimizerRun {
        best_point,
        best_value,
        final_mean: mean.as_slice().to_vec(),
        final_sigma: sigma,
        fes_used: fes,
        generations: generation,
        stopped_by: stop.expect("loop exits only with a stop reason"),
    })
}
