use std::collections::HashMap;

use super::config::Algorithm;
use crate::error::{Error, Result};
use crate::seeding::{derive, fnv1a};

/// Seed of one run: SplitMix64 mixing of `seed0` with the FNV-1a hashes of
/// the problem id and the algorithm id, then with the run index.
pub fn run_seed(seed0: u64, problem_id: &str, algorithm: Algorithm, run: usize) -> u64 {
    let s = derive(seed0, fnv1a(problem_id));
    let s = derive(s, fnv1a(algorithm.id()));
    derive(s, run as u64)
}

/// Fails if two runs of the experiment would share a seed.
pub fn check_unique(seeds: &[(String, Algorithm, usize, u64)]) -> Result<()> {
    let mut seen: HashMap<u64, (&str, Algorithm, usize)> = HashMap::new();
    for (p, a, r, s) in seeds {
        if let Some((p0, a0, r0)) = seen.insert(*s, (p, *a, *r)) {
            return Err(Error::InvalidConfig(format!(
                "seed collision between {p0}/{a0}/run{r0} and {p}/{a}/run{r}"
            )));
        }
    }
    Ok(())
}
