use serde::{Deserialize, Serialize};

use crate::fock::Hypothesis;
use crate::receiver::Orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Psi,
    Phi,
    /// Some step counted two or more photons.
    Failure,
}

impl From<Hypothesis> for Decision {
    fn from(h: Hypothesis) -> Self {
        match h {
            Hypothesis::Psi => Decision::Psi,
            Hypothesis::Phi => Decision::Phi,
        }
    }
}

/// How a failure event enters the error probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailurePolicy {
    /// Every failure is an error.
    #[default]
    CountAsError,
    /// Guess with a fair coin: half an error on average.
    FairCoin,
}

impl FailurePolicy {
    pub fn error_weight(self) -> f64 {
        match self {
            FailurePolicy::CountAsError => 1.0,
            FailurePolicy::FairCoin => 0.5,
        }
    }
}

/// Final count to decision in the counting basis: `0 -> Psi`, `1 -> Phi`.
pub fn decide(final_k: usize) -> Decision {
    decide_oriented(final_k, Orientation::Direct)
}

/// Final count to decision when the zero-click outcome may be aligned with
/// either hypothesis.
pub fn decide_oriented(final_k: usize, orientation: Orientation) -> Decision {
    match (final_k, orientation) {
        (0, Orientation::Direct) | (1, Orientation::Swapped) => Decision::Psi,
        (1, Orientation::Direct) | (0, Orientation::Swapped) => Decision::Phi,
        _ => Decision::Failure,
    }
}

/// Error weight of `decision` when `truth` was sent.
pub fn error_weight(decision: Decision, truth: Hypothesis, policy: FailurePolicy) -> f64 {
    match decision {
        Decision::Failure => policy.error_weight(),
        d if d == Decision::from(truth) => 0.0,
        _ => 1.0,
    }
}
