use rand::Rng;

/// Standard normal deviates via the Box–Muller transform. Each pair of
/// uniforms yields two deviates; the second is cached for the next call.
pub(crate) struct BoxMuller<'a, R: Rng> {
    rng: &'a mut R,
    spare: Option<f64>,
}

impl<'a, R: Rng> BoxMuller<'a, R> {
    pub(crate) fn new(rng: &'a mut R) -> Self {
        Self { rng, spare: None }
    }

    pub(crate) fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the log finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Fisher–Yates shuffle of `0..n`.
pub(crate) fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}
