use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation (divisor `n - 1`); 0 for a single value.
pub fn std_dev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return if v.is_empty() { f64::NAN } else { 0.0 };
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        // Written so that two infinities of the same sign stay infinite.
        s[n / 2 - 1] + 0.5 * (s[n / 2] - s[n / 2 - 1])
    }
}

/// Outcome of comparing a reference sample against another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// The reference is significantly better (lower median).
    #[serde(rename = "+")]
    Better,
    #[serde(rename = "≈")]
    Similar,
    /// The reference is significantly worse.
    #[serde(rename = "-")]
    Worse,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Better => "+",
            Verdict::Similar => "≈",
            Verdict::Worse => "-",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Verdict::Better),
            "≈" => Some(Verdict::Similar),
            "-" | "−" => Some(Verdict::Worse),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankSumMethod {
    /// Exact for a combined size of at most 12, normal otherwise.
    #[default]
    Auto,
    Exact,
    Normal,
}

/// Largest pooled size accepted by the exact method.
pub const EXACT_LIMIT: usize = 24;
const AUTO_EXACT_MAX: usize = 12;
pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSum {
    /// Sum of the (mid)ranks of `a` in the pooled sample.
    pub statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub verdict: Verdict,
}

/// Two-sided Wilcoxon rank-sum (Mann–Whitney) test of `a` against `b`.
/// The verdict is from `a`'s point of view, lower being better.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<RankSum> {
    wilcoxon_rank_sum_with(a, b, RankSumMethod::Auto)
}

pub fn wilcoxon_rank_sum_with(a: &[f64], b: &[f64], method: RankSumMethod) -> Result<RankSum> {
    if a.len() < 3 || b.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "rank-sum test needs at least 3 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("rank-sum test got NaN".into()));
    }
    let n1 = a.len();
    let n = n1 + b.len();
    let ranks = midranks(&a.iter().chain(b).copied().collect::<Vec<_>>());
    let statistic: f64 = ranks[..n1].iter().sum();

    let p_value = if ranks.iter().all(|&r| r == ranks[0]) {
        1.0
    } else {
        let exact = match method {
            RankSumMethod::Auto => n <= AUTO_EXACT_MAX,
            RankSumMethod::Exact => true,
            RankSumMethod::Normal => false,
        };
        if exact {
            if n > EXACT_LIMIT {
                return Err(Error::InvalidArgument(format!(
                    "exact rank-sum limited to {EXACT_LIMIT} pooled values, got {n}"
                )));
            }
            exact_p(&ranks, n1, statistic)
        } else {
            normal_p(&ranks, n1, statistic)
        }
    };

    let verdict = if p_value < SIGNIFICANCE {
        match median(a).total_cmp(&median(b)) {
            std::cmp::Ordering::Less => Verdict::Better,
            std::cmp::Ordering::Greater => Verdict::Worse,
            std::cmp::Ordering::Equal => Verdict::Similar,
        }
    } else {
        Verdict::Similar
    };
    Ok(RankSum {
        statistic,
        p_value,
        verdict,
    })
}

/// 1-based ranks with ties sharing their average rank.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        let r = (start + 1 + end) as f64 / 2.0;
        for &k in &idx[start..end] {
            ranks[k] = r;
        }
        start = end;
    }
    ranks
}

/// Share of all `C(n, n1)` rank assignments at least as far from the
/// expected rank sum as the observed one.
fn exact_p(ranks: &[f64], n1: usize, observed: f64) -> f64 {
    let n = ranks.len();
    let expected = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let threshold = (observed - expected).abs() - 1e-9;
    let (mut extreme, mut total) = (0u64, 0u64);
    // Walk every n1-subset of 0..n via Gosper's hack.
    let mut set: u64 = (1u64 << n1) - 1;
    let limit = 1u64 << n;
    while set < limit {
        let w: f64 = (0..n).filter(|&i| set >> i & 1 == 1).map(|i| ranks[i]).sum();
        if (w - expected).abs() >= threshold {
            extreme += 1;
        }
        total += 1;
        let c = set & set.wrapping_neg();
        let r = set + c;
        set = (((r ^ set) >> 2) / c) | r;
    }
    extreme as f64 / total as f64
}

/// Normal approximation with tie and continuity corrections.
fn normal_p(ranks: &[f64], n1: usize, observed: f64) -> f64 {
    let n = ranks.len() as f64;
    let n1f = n1 as f64;
    let n2f = n - n1f;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    let var = n1f * n2f / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let expected = n1f * (n + 1.0) / 2.0;
    let z = ((observed - expected).abs() - 0.5).max(0.0) / var.sqrt();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * (1.0 - std_normal.cdf(z))).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_stats() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&v), 2.5);
        assert!((std_dev(&v) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(median(&v), 2.5);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(std_dev(&[7.0]), 0.0);
        assert_eq!(median(&[1.0, f64::INFINITY]), f64::INFINITY);
    }

    #[test]
    fn midranks_share_ties() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn separated_samples() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((r.p_value - 0.1).abs() < 1e-12);
        assert_eq!(r.statistic, 6.0);
        // Not significant at 0.05 with three values each.
        assert_eq!(r.verdict, Verdict::Similar);
    }

    #[test]
    fn identical_and_constant() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = wilcoxon_rank_sum(&a, &a).unwrap();
        assert_eq!(r.verdict, Verdict::Similar);
        let c = wilcoxon_rank_sum(&[5.0; 4], &[5.0; 6]).unwrap();
        assert_eq!(c.p_value, 1.0);
        assert!(wilcoxon_rank_sum(&[1.0, 2.0], &[3.0, 4.0, 5.0]).is_err());
    }

    #[test]
    fn significant_verdicts() {
        let lo: Vec<f64> = (0..10).map(f64::from).collect();
        let hi: Vec<f64> = (100..110).map(f64::from).collect();
        assert_eq!(wilcoxon_rank_sum(&lo, &hi).unwrap().verdict, Verdict::Better);
        assert_eq!(wilcoxon_rank_sum(&hi, &lo).unwrap().verdict, Verdict::Worse);
    }

    #[test]
    fn verdict_symbols() {
        for v in [Verdict::Better, Verdict::Similar, Verdict::Worse] {
            assert_eq!(Verdict::from_symbol(v.symbol()), Some(v));
        }
    }
}
