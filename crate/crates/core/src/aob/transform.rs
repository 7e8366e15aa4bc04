//! Oscillation and asymmetry transforms applied to rotated subspace vectors.

/// Elementwise oscillation transform. Zero maps to zero.
pub fn t_osz(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    t_osz_in_place(&mut out);
    out
}

pub fn t_osz_in_place(v: &mut [f64]) {
    for x in v.iter_mut() {
        *x = osz_scalar(*x);
    }
}

#[inline]
fn osz_scalar(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let xhat = x.abs().ln();
    let (c1, c2) = if x > 0.0 { (10.0, 7.9) } else { (5.5, 3.1) };
    x.signum() * (xhat + 0.049 * ((c1 * xhat).sin() + (c2 * xhat).sin())).exp()
}

/// Asymmetry transform with strength `beta`. Position `i` and length are
/// taken relative to `v` itself; a length-1 vector is left unchanged.
pub fn t_asy(v: &[f64], beta: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    t_asy_in_place(&mut out, beta);
    out
}

pub fn t_asy_in_place(v: &mut [f64], beta: f64) {
    let n = v.len();
    if n < 2 {
        return;
    }
    let denom = (n - 1) as f64;
    for (i, x) in v.iter_mut().enumerate() {
        if *x > 0.0 {
            let exponent = 1.0 + beta * (i as f64 / denom) * x.sqrt();
            *x = x.powf(exponent);
        }
    }
}
