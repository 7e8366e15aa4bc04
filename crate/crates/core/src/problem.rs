use crate::bounds::Bounds;

/// A box-constrained black-box minimisation problem. Implementations must be
/// safe to evaluate from several threads at once.
pub trait Problem: Sync {
    fn dim(&self) -> usize;
    fn bounds(&self) -> Bounds;
    fn evaluate(&self, x: &[f64]) -> f64;
}

/// Adapts a plain function to [`Problem`].
pub struct FnProblem<F> {
    dim: usize,
    bounds: Bounds,
    f: F,
}

impl<F> FnProblem<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dim: usize, bounds: Bounds, f: F) -> Self {
        Self { dim, bounds, f }
    }
}

impl<F> Problem for FnProblem<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn bounds(&self) -> Bounds {
        self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}
