use super::dsm::DesignStructureMatrix;
use crate::error::{Error, Result};

/// Default threshold for the second-order difference test.
pub fn default_interaction_tolerance(f_x0: f64) -> f64 {
    1e-10 * f_x0.abs().max(1.0)
}

fn check(value: f64, fes: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { value, fes })
    }
}

/// Finite-difference test for an interaction between `p` and `q` at `x0`.
///
/// Compares `f(x0+δe_p+δe_q) - f(x0+δe_q)` with `f(x0+δe_p) - f(x0)`.
/// Uses four evaluations. `tol = None` picks
/// [`default_interaction_tolerance`] from `f(x0)`.
pub fn detect_interaction<F>(
    mut f: F,
    p: usize,
    q: usize,
    x0: &[f64],
    delta: f64,
    tol: Option<f64>,
) -> Result<bool>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    for i in [p, q] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
    }
    if p == q {
        return Err(Error::InvalidArgument("p and q must differ".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let mut x = x0.to_vec();
    let f0 = check(f(&x), 1)?;
    x[p] += delta;
    let fp = check(f(&x), 2)?;
    x[q] += delta;
    let fpq = check(f(&x), 3)?;
    x[p] = x0[p];
    let fq = check(f(&x), 4)?;
    let tol = tol.unwrap_or_else(|| default_interaction_tolerance(f0));
    Ok(((fpq - fq) - (fp - f0)).abs() > tol)
}

/// Estimates the full DSM with cached evaluations:
/// `1 + n + n(n-1)/2` calls instead of `4` per pair.
/// Returns the matrix and the number of evaluations used.
pub fn estimate_theta<F>(
    mut f: F,
    x0: &[f64],
    delta: f64,
    tol: Option<f64>,
) -> Result<(DesignStructureMatrix, usize)>
where
    F: FnMut(&[f64]) -> f64,
{
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let n = x0.len();
    let mut fes = 0usize;
    let mut eval = |x: &[f64], fes: &mut usize| {
        *fes += 1;
        check(f(x), *fes)
    };
    let mut x = x0.to_vec();
    let f0 = eval(&x, &mut fes)?;
    let tol = tol.unwrap_or_else(|| default_interaction_tolerance(f0));
    let mut single = Vec::with_capacity(n);
    for p in 0..n {
        x[p] += delta;
        single.push(eval(&x, &mut fes)?);
        x[p] = x0[p];
    }
    let mut theta = DesignStructureMatrix::identity(n);
    for p in 0..n {
        x[p] += delta;
        for q in p + 1..n {
            x[q] += delta;
            let fpq = eval(&x, &mut fes)?;
            x[q] = x0[q];
            if ((fpq - single[q]) - (single[p] - f0)).abs() > tol {
                theta.set(p, q, true)?;
            }
        }
        x[p] = x0[p];
    }
    Ok((theta, fes))
}
