//! Full N-step runs: exact enumeration of detection records for small N and
//! seeded Monte Carlo sampling for large N.

pub mod decision;
pub mod exact;
pub mod montecarlo;
pub mod node;
pub mod stats;
pub mod trajectory;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{StatePair, DEFAULT_TRUNC_BUDGET};
use crate::receiver::ReceiverConfig;

pub use decision::{decide, decide_oriented, error_weight, Decision, FailurePolicy};
pub use exact::exact_error_probability;
pub use montecarlo::{mc_error_probability, sample_trajectories, Sampler};
pub use node::{run_step, BranchNode, StepResult};
pub use stats::{
    mean_photon_budget, one_click_statistics, photon_budget, wilson, ClickStatistics, PhotonBudget,
};
pub use trajectory::{read_jsonl, write_jsonl, Trajectory};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    #[serde(flatten)]
    pub receiver: ReceiverConfig,
    /// Largest N accepted by exact enumeration.
    pub n_exact_max: usize,
    /// Branches whose larger record probability falls below this are pruned.
    pub p_min: f64,
    /// Largest pruned mass an exact run may report.
    pub interval_budget: f64,
    pub trunc_budget: f64,
    pub failure_policy: FailurePolicy,
    pub z: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            receiver: ReceiverConfig::default(),
            n_exact_max: 16,
            p_min: 1e-12,
            interval_budget: 1e-6,
            trunc_budget: DEFAULT_TRUNC_BUDGET,
            failure_policy: FailurePolicy::default(),
            z: Z95,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.into()));
        if !(self.p_min >= 0.0 && self.p_min < 1.0) {
            return bad("p_min must lie in [0, 1)");
        }
        if !(self.interval_budget >= 0.0) || !(self.trunc_budget >= 0.0) {
            return bad("budgets must be non-negative");
        }
        if !(self.z > 0.0 && self.z.is_finite()) {
            return bad("z must be positive");
        }
        self.receiver.perturbation.validate()
    }

    pub(crate) fn check_truncation(&self, pair: &StatePair) -> Result<()> {
        if pair.discarded_norm() > self.trunc_budget {
            return Err(Error::TruncationBudget {
                discarded: pair.discarded_norm(),
                budget: self.trunc_budget,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// How a sweep point is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Mc,
    /// Exact up to `n_exact_max`, Monte Carlo beyond.
    #[default]
    Auto,
}

/// Average error probability under equal priors, with its interval and the
/// run's audit quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub n: usize,
    pub method: Method,
    pub p_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_fail: f64,
    pub fail_ci_low: f64,
    pub fail_ci_high: f64,
    /// Probability mass of pruned branches; zero for Monte Carlo.
    pub pruned_mass: f64,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Norm lost when the pair was brought into the truncated space.
    pub truncation_deficit: f64,
    /// Smallest `cap^2 + slack/N - |beta|^2` over every planned step.
    pub cap_margin: f64,
    /// Steps whose analytic displacement had to be scaled back to the cap.
    pub clamped_steps: u64,
    /// Rotation weight of the design basis, when the pair was degenerate.
    pub delta: Option<f64>,
    pub config: EngineConfig,
}

impl ErrorEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Evaluate one point in the requested mode.
pub fn estimate(
    pair: &StatePair,
    n: usize,
    mode: Mode,
    samples: u64,
    seed: u64,
    cfg: &EngineConfig,
) -> Result<ErrorEstimate> {
    match mode {
        Mode::Exact => exact_error_probability(pair, n, cfg),
        Mode::Mc => mc_error_probability(pair, n, samples, seed, cfg),
        Mode::Auto if n <= cfg.n_exact_max => exact_error_probability(pair, n, cfg),
        Mode::Auto => mc_error_probability(pair, n, samples, seed, cfg),
    }
}
