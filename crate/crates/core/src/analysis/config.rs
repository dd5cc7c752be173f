use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fit::FitConfig;
use crate::engine::{EngineConfig, Mode};
use crate::error::Result;
use crate::fock::DEFAULT_CUTOFF;

/// Settings shared by every subcommand, read from a JSON file. Every key is
/// optional; engine and receiver settings sit at the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub engine: EngineConfig,
    pub cutoff: usize,
    pub seed: u64,
    pub mode: Mode,
    pub n_values: Option<Vec<usize>>,
    /// Fixed Monte Carlo sample count; when absent it is
    /// `max(samples_min, samples_factor * N)`.
    pub samples: Option<u64>,
    pub samples_min: u64,
    pub samples_factor: f64,
    pub fit: FitConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            engine: EngineConfig::default(),
            cutoff: DEFAULT_CUTOFF,
            seed: 0,
            mode: Mode::Auto,
            n_values: None,
            samples: None,
            samples_min: 10_000,
            samples_factor: 100.0,
            fit: FitConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
