use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

use imperfect::exactfield::is_prime;
use imperfect::hyperkollar::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Pindep,
    Kollar,
    Cubic2,
    All,
}

impl SuiteId {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Pindep => "pindep",
            SuiteId::Kollar => "kollar",
            SuiteId::Cubic2 => "cubic2",
            SuiteId::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("the {suite} suite needs characteristic {allowed}, got {got}")]
    UnsupportedPrime { suite: &'static str, allowed: &'static str, got: u32 },
    #[error("n must be between 1 and {max}, got {got}")]
    BadN { max: usize, got: usize },
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("--elems is only used by the pindep and all suites")]
    ElemsWithoutPindep,
    #[error("invalid field or element list: {0}")]
    Input(String),
}

/// Defaults: primes {2, 3, 5} for pindep, {3, 5} for the degree-p family,
/// n in {1, 2}, point degree 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    pub p: Option<u32>,
    pub n: Option<usize>,
    pub point_degree: u32,
    pub budget: u64,
    pub seed: u64,
    pub elems: Option<String>,
    pub field: Option<String>,
    #[serde(skip)]
    pub timings: bool,
}

pub const MAX_N: usize = 3;
pub const DEFAULT_POINT_DEGREE: u32 = 2;

impl SuiteConfig {
    pub fn new(suite: SuiteId) -> SuiteConfig {
        SuiteConfig {
            suite,
            p: None,
            n: None,
            point_degree: DEFAULT_POINT_DEGREE,
            budget: DEFAULT_BUDGET,
            seed: 0,
            elems: None,
            field: None,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        if let Some(n) = self.n {
            if n == 0 || n > MAX_N {
                return Err(ConfigError::BadN { max: MAX_N, got: n });
            }
        }
        if let Some(p) = self.p {
            if !is_prime(p) {
                return Err(ConfigError::NotPrime(p));
            }
            match self.suite {
                SuiteId::Kollar if p < 3 => {
                    return Err(ConfigError::UnsupportedPrime { suite: "kollar", allowed: "an odd prime", got: p })
                }
                SuiteId::Cubic2 if p != 2 => {
                    return Err(ConfigError::UnsupportedPrime { suite: "cubic2", allowed: "2", got: p })
                }
                _ => {}
            }
        }
        if (self.elems.is_some() || self.field.is_some()) && !matches!(self.suite, SuiteId::Pindep | SuiteId::All) {
            return Err(ConfigError::ElemsWithoutPindep);
        }
        Ok(())
    }

    pub(crate) fn pindep_primes(&self) -> Vec<u32> {
        self.p.map_or_else(|| vec![2, 3, 5], |p| vec![p])
    }

    pub(crate) fn kollar_primes(&self) -> Vec<u32> {
        match self.p {
            Some(p) if p >= 3 => vec![p],
            Some(_) => Vec::new(),
            None => vec![3, 5],
        }
    }

    pub(crate) fn kollar_dims(&self) -> Vec<usize> {
        self.n.map_or_else(|| vec![1, 2], |n| vec![n])
    }

    pub(crate) fn runs_cubic(&self) -> bool {
        self.p.is_none_or(|p| p == 2)
    }
}
