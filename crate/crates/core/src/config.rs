use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cardinality caps enforced by every enumeration in the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Limits {
    /// Largest hom-set that may be materialized.
    pub max_hom_set: usize,
    /// Largest colimit apex that may be built.
    pub max_apex: usize,
    /// Largest product (or search-node count) explored while computing limits.
    pub max_product: usize,
    /// Budget for exhaustive coloring scans and backtracking nodes.
    pub max_colorings: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_hom_set: 100_000,
            max_apex: 10_000,
            max_product: 1_000_000,
            max_colorings: 10_000_000,
        }
    }
}

impl Limits {
    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("max_hom_set", self.max_hom_set),
            ("max_apex", self.max_apex),
            ("max_product", self.max_product),
            ("max_colorings", self.max_colorings),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(Error::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_hom(&self, what: &str, size: u128) -> Result<usize> {
        if size > self.max_hom_set as u128 {
            return Err(Error::bound(what, size, self.max_hom_set));
        }
        Ok(size as usize)
    }

    pub(crate) fn check_apex(&self, what: &str, size: usize) -> Result<()> {
        if size > self.max_apex {
            return Err(Error::bound(what, size, self.max_apex));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Dot,
    Text,
}

/// Run-wide configuration, recorded in every certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Config {
    #[serde(flatten)]
    pub limits: Limits,
    pub sample_trials: usize,
    pub rng_seed: u64,
    pub output_format: OutputFormat,
    /// Largest Hales–Jewett dimension tried by the partite pipelines.
    pub hj_nmax: usize,
    /// Largest witness order size tried by the built-in ordered solvers.
    pub solver_max_size: usize,
    /// Worker threads for coloring scans; 0 means one per available core.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            limits: Limits::default(),
            sample_trials: 1_000,
            rng_seed: 0x5eed,
            output_format: OutputFormat::Json,
            hj_nmax: 4,
            solver_max_size: 8,
            threads: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.limits.validate()?;
        if self.sample_trials == 0 || self.hj_nmax == 0 || self.solver_max_size == 0 {
            return Err(Error::Invalid(
                "sample_trials, hj_nmax and solver_max_size must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_caps() {
        let l = Limits::default();
        assert_eq!(l.max_hom_set, 100_000);
        assert_eq!(l.max_apex, 10_000);
        assert_eq!(l.max_product, 1_000_000);
        assert!(Config::default().validate().is_ok());
    }

    #[test]
    fn zero_cap_rejected() {
        let mut c = Config::default();
        c.limits.max_apex = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_json_is_flat() {
        let c = Config::default();
        let v = serde_json::to_value(&c).unwrap();
        assert!(v.get("maxHomSet").is_some());
        let back: Config = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
