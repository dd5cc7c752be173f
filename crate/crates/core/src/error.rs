use crate::receiver::DegeneracyReport;

/// Errors raised across the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("input vectors are linearly dependent")]
    ParallelInputs,

    #[error("non-finite amplitude at photon number {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("pair invariant violated: {0}")]
    PairInvariant(String),

    #[error("degenerate overlap denominator {:.3e}", .0.denominator)]
    Degenerate(DegeneracyReport),

    #[error("displacement power {beta_sq:.4} exceeds cap {limit:.4}")]
    CapExceeded { beta_sq: f64, limit: f64 },

    #[error("discarded norm {discarded:.3e} exceeds truncation budget {budget:.3e}")]
    TruncationBudget { discarded: f64, budget: f64 },

    #[error("pruned mass {pruned:.3e} exceeds interval budget {budget:.3e}")]
    PrunedMass { pruned: f64, budget: f64 },

    #[error("tail certification failed: {0}")]
    TailCertification(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("final states have no weight on the 0/1-photon subspace")]
    FinalSubspace,

    #[error("record is impossible under both hypotheses (step {step})")]
    ImpossibleRecord { step: usize },

    #[error("plan/operator mismatch: {0}")]
    Mismatch(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
