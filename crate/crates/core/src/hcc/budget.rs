use crate::error::{Error, Result};

/// Evaluations granted to the global phase for a given degree of overlap:
/// zero without overlap, otherwise `⌊(0.2 + 0.8·DO)·tfes⌋`.
///
/// Products within 1e-6 of an integer are snapped to it before flooring so
/// that decimal DO values are not cut short by binary rounding.
/// [`glo_fes_from_counts`] is the exact integer form.
///
/// # Panics
/// If `do_value` is outside `[0, 1]`.
pub fn glo_fes(do_value: f64, tfes: usize) -> usize {
    assert!(
        (0.0..=1.0).contains(&do_value),
        "degree of overlap must lie in [0, 1], got {do_value}"
    );
    if do_value == 0.0 {
        return 0;
    }
    let v = (0.2 + 0.8 * do_value) * tfes as f64;
    let r = v.round();
    if (v - r).abs() < 1e-6 {
        r as usize
    } else {
        v.floor() as usize
    }
}

/// `glo_fes(overlapping / d, tfes)` in exact integer arithmetic.
pub fn glo_fes_from_counts(overlapping: usize, d: usize, tfes: usize) -> usize {
    if overlapping == 0 || d == 0 {
        return 0;
    }
    let num = tfes as u128 * (d as u128 + 4 * overlapping as u128);
    (num / (5 * d as u128)) as usize
}

/// Contribution-weighted blend of two estimates of the overlapping
/// variables. Falls back to the plain mean when both contributions are 0.
pub fn blend_overlap(prev: &[f64], cur: &[f64], delta_prev: f64, delta_cur: f64) -> Result<Vec<f64>> {
    if prev.len() != cur.len() {
        return Err(Error::DimensionMismatch {
            expected: prev.len(),
            actual: cur.len(),
        });
    }
    for d in [delta_prev, delta_cur] {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "contributions must be finite and non-negative, got {d}"
            )));
        }
    }
    let total = delta_prev + delta_cur;
    Ok(prev
        .iter()
        .zip(cur)
        .map(|(&a, &b)| {
            if total == 0.0 {
                0.5 * (a + b)
            } else {
                (delta_prev * a + delta_cur * b) / total
            }
        })
        .collect())
}
