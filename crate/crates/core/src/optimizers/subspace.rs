use crate::error::{Error, Result};

/// Wraps a full-dimensional objective as a function of the variables in
/// `indices`, the rest held at `context`. Each call is one evaluation of
/// `objective`.
///
/// # Panics
/// The returned closure panics if called with a slice whose length differs
/// from `indices.len()`.
pub fn make_subspace_objective<F>(
    mut objective: F,
    context: &[f64],
    indices: &[usize],
) -> Result<impl FnMut(&[f64]) -> f64>
where
    F: FnMut(&[f64]) -> f64,
{
    if let Some(&bad) = indices.iter().find(|&&i| i >= context.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            dim: context.len(),
        });
    }
    let mut full = context.to_vec();
    let indices = indices.to_vec();
    Ok(move |sub: &[f64]| {
        assert_eq!(sub.len(), indices.len(), "subspace argument length");
        for (&i, &v) in indices.iter().zip(sub) {
            full[i] = v;
        }
        objective(&full)
    })
}
