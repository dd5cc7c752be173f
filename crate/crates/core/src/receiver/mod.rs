//! Feedforward planning: decompose the conditional pair, pick the
//! displacement for the next tap, and handle degenerate pairs through a
//! slightly rotated design basis.

pub mod beta;
pub mod decomposition;
pub mod final_step;
pub mod perturb;
pub mod planner;
mod search;

pub use beta::{
    analyze_x, choose_beta, compute_x, refine_beta, refine_displacement, tap_displacement,
    DegeneracyReport, OverlapModel, Verdict,
};
pub use decomposition::{decompose, orthogonal_decomposition, OrthoDecomposition};
pub use final_step::{plan_final_bounded, plan_final_displacement, FinalPlan, Orientation};
pub use perturb::{perturbed_basis, PerturbationConfig};
pub use planner::{DesignState, PlanSource, Planner, ReceiverConfig, StepPlan};
