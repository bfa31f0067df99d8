//! Flat key-value configuration file (TOML). Flags win over the file, the
//! file wins over built-in defaults.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "FDSPAN_SEED";

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub phi: Option<f64>,
    #[serde(alias = "A")]
    pub a: Option<f64>,
    #[serde(alias = "B")]
    pub b: Option<f64>,
    pub c_sample: Option<f64>,
    pub c_deg: Option<f64>,
    pub retries: Option<usize>,
    pub max_doublings: Option<u32>,
    pub samples: Option<usize>,
    pub density: Option<f64>,
    pub max_edges: Option<usize>,
    pub max_universe: Option<usize>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Root seed: flag, then config, then `FDSPAN_SEED`, then 0.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = flag.or(self.seed) {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV} must be an unsigned integer, got `{v}`")),
            Err(_) => Ok(0),
        }
    }
}

/// `flag`, else the config value, else `default`.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}
