use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Base functions a benchmark problem is composed from. Each is evaluated on
/// a whole (transformed) subspace vector and is zero at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseFunction {
    Schwefel,
    Elliptic,
    Rastrigin,
    Ackley,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 4] = [
        BaseFunction::Elliptic,
        BaseFunction::Schwefel,
        BaseFunction::Rastrigin,
        BaseFunction::Ackley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Schwefel => "schwefel",
            BaseFunction::Elliptic => "elliptic",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Ackley => "ackley",
        }
    }

    /// Leading letter used in problem ids such as `S3` or `E1`.
    pub fn letter(self) -> char {
        match self {
            BaseFunction::Schwefel => 'S',
            BaseFunction::Elliptic => 'E',
            BaseFunction::Rastrigin => 'R',
            BaseFunction::Ackley => 'A',
        }
    }

    /// Smallest vector length the function is defined for.
    pub fn min_dim(self) -> usize {
        match self {
            BaseFunction::Elliptic => 2,
            _ => 1,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            BaseFunction::Schwefel => schwefel(x),
            BaseFunction::Elliptic => elliptic(x),
            BaseFunction::Rastrigin => rastrigin(x),
            BaseFunction::Ackley => ackley(x),
        }
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "schwefel" | "s" => Ok(BaseFunction::Schwefel),
            "elliptic" | "e" => Ok(BaseFunction::Elliptic),
            "rastrigin" | "r" => Ok(BaseFunction::Rastrigin),
            "ackley" | "a" => Ok(BaseFunction::Ackley),
            other => Err(Error::InvalidArgument(format!("unknown base function `{other}`"))),
        }
    }
}

/// Schwefel 1.2: sum of squared prefix sums.
pub fn schwefel(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for &v in x {
        prefix += v;
        total += prefix * prefix;
    }
    total
}

/// Ill-conditioned elliptic, condition number 1e6 across the vector.
pub fn elliptic(x: &[f64]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return x[0] * x[0];
    }
    let denom = (n - 1) as f64;
    x.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / denom) * v * v)
        .sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

/// Ackley, arranged as `20(1 - e^{-0.2 r}) + (e - e^{mean cos})` so the
/// origin evaluates to exactly zero.
pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let inv_n = 1.0 / n as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    20.0 * (1.0 - (-0.2 * (sum_sq * inv_n).sqrt()).exp()) + (E - (sum_cos * inv_n).exp())
}
