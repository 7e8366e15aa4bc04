use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aob::{BaseFunction, ProblemSpec};
use crate::error::{Error, Result};
use crate::hcc::DEFAULT_TFES;

pub const DEFAULT_RUNS_FULL: usize = 25;
pub const DEFAULT_RUNS_MINI: usize = 5;
pub const MINI_TFES_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Global phase plus cooperative loop on the RDDSM grouping.
    Hcc,
    /// Cooperative loop alone on the RDDSM grouping.
    CcRddsm,
    /// Cooperative loop on a random disjoint grouping.
    CcRandom,
    /// Separable ES over the whole space.
    NdaSep,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Hcc,
        Algorithm::CcRddsm,
        Algorithm::CcRandom,
        Algorithm::NdaSep,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Hcc => "hcc",
            Algorithm::CcRddsm => "cc_rddsm",
            Algorithm::CcRandom => "cc_random",
            Algorithm::NdaSep => "nda_sep",
        }
    }

    pub fn uses_decomposition(self) -> bool {
        self != Algorithm::NdaSep
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::parse("algorithm", format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Full,
    /// Block sizes divided by 10 (D = 100) and a capped budget.
    Mini,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub base: BaseFunction,
    /// Preset overlap level, 1..=6.
    pub gamma_level: u8,
}

impl SuiteEntry {
    pub fn problem_id(&self) -> String {
        format!("{}{}", self.base.letter(), self.gamma_level)
    }

    pub fn spec(&self, scale: Scale, seed: u64) -> Result<ProblemSpec> {
        match scale {
            Scale::Full => ProblemSpec::preset(self.base, self.gamma_level, seed),
            Scale::Mini => ProblemSpec::mini_preset(self.base, self.gamma_level, seed),
        }
    }

    /// All 24 base/level combinations.
    pub fn full_suite() -> Vec<SuiteEntry> {
        BaseFunction::ALL
            .into_iter()
            .flat_map(|base| (1..=6).map(move |gamma_level| SuiteEntry { base, gamma_level }))
            .collect()
    }
}

/// Experiment description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Vec<SuiteEntry>,
    pub algorithms: Vec<Algorithm>,
    /// Defaults to 25 at full scale and 5 at mini scale.
    #[serde(default)]
    pub runs: Option<usize>,
    /// Defaults to 3e6; capped at 1e5 at mini scale.
    #[serde(default)]
    pub tfes: Option<usize>,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub seed0: u64,
    pub output_dir: PathBuf,
    /// Parallel runs; `None` uses all cores.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn runs(&self) -> usize {
        self.runs.unwrap_or(match self.scale {
            Scale::Full => DEFAULT_RUNS_FULL,
            Scale::Mini => DEFAULT_RUNS_MINI,
        })
    }

    pub fn tfes(&self) -> usize {
        let t = self.tfes.unwrap_or(DEFAULT_TFES);
        match self.scale {
            Scale::Full => t,
            Scale::Mini => t.min(MINI_TFES_CAP),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.suite.is_empty() {
            return bad("suite is empty");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed");
        }
        if self.runs() == 0 {
            return bad("runs must be at least 1");
        }
        if self.tfes() == 0 {
            return bad("tfes must be positive");
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        for e in &self.suite {
            if !(1..=6).contains(&e.gamma_level) {
                return Err(Error::GammaLevel(e.gamma_level));
            }
        }
        let mut ids: Vec<String> = self.suite.iter().map(SuiteEntry::problem_id).collect();
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return bad("suite lists a problem twice");
        }
        let mut algs = self.algorithms.clone();
        algs.sort();
        if algs.windows(2).any(|w| w[0] == w[1]) {
            return bad("algorithm listed twice");
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_by_scale() {
        let json = r#"{"suite":[{"base":"elliptic","gamma_level":3}],
                       "algorithms":["hcc","nda_sep"],"scale":"mini","output_dir":"out"}"#;
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        c.validate().unwrap();
        assert_eq!(c.runs(), 5);
        assert_eq!(c.tfes(), 100_000);
        assert_eq!(c.suite[0].problem_id(), "E3");
        let full = ExperimentConfig {
            scale: Scale::Full,
            ..c.clone()
        };
        assert_eq!(full.runs(), 25);
        assert_eq!(full.tfes(), 3_000_000);
        let capped = ExperimentConfig {
            tfes: Some(500_000),
            ..c
        };
        assert_eq!(capped.tfes(), 100_000);
    }

    #[test]
    fn rejects_bad_configs() {
        let json = r#"{"suite":[],"algorithms":["hcc"],"output_dir":"o"}"#;
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert!(c.validate().is_err());
        let unknown = r#"{"suite":[],"algorithms":["hcc"],"output_dir":"o","extra":1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(unknown).is_err());
        let bad_alg = r#"{"suite":[],"algorithms":["dg2"],"output_dir":"o"}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad_alg).is_err());
        assert_eq!(SuiteEntry::full_suite().len(), 24);
        assert_eq!("cc_random".parse::<Algorithm>().unwrap(), Algorithm::CcRandom);
    }
}
