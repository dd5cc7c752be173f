use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, StatePair};
use crate::operators::KrausFamily;
use crate::receiver::{DesignState, StepPlan};

/// Tolerance on the summed outcome probabilities of one step.
pub const PROB_TOL: f64 = 1e-9;

/// One node of the detection-record tree.
///
/// Conditional states are kept normalised; the probability of the record so
/// far under each hypothesis is tracked separately. A hypothesis under which
/// the record is impossible has no state.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchNode {
    pub record: Vec<u8>,
    pub states: [Option<FockVector>; 2],
    pub probs: [f64; 2],
    /// What the planner sees: equal to the true states unless the pair is
    /// planned in a rotated basis.
    pub design: DesignState,
}

impl BranchNode {
    pub fn root(truth: &StatePair, design: DesignState) -> Self {
        Self {
            record: Vec::new(),
            states: [Some(truth.psi().clone()), Some(truth.phi().clone())],
            probs: [1.0, 1.0],
            design,
        }
    }

    pub fn steps_taken(&self) -> usize {
        self.record.len()
    }

    /// Larger of the two record probabilities.
    pub fn max_prob(&self) -> f64 {
        self.probs[0].max(self.probs[1])
    }
}

/// Children of one step plus the probability mass that went to outcomes
/// beyond the family's `k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub children: Vec<BranchNode>,
    /// Per hypothesis, absolute probability of the unlisted outcomes.
    pub overflow: [f64; 2],
}

fn branch(v: &FockVector, kraus: &KrausFamily, k: usize) -> (Option<FockVector>, f64) {
    let w = kraus.apply(k, v);
    let p = w.norm_sqr();
    if p > 0.0 {
        (Some(w.scaled(C64::new(p.sqrt().recip(), 0.0))), p)
    } else {
        (None, 0.0)
    }
}

/// Apply one measurement step to `node`.
pub fn run_step(node: &BranchNode, plan: &StepPlan, kraus: &KrausFamily) -> Result<StepResult> {
    if plan.step != node.steps_taken() + 1 {
        return Err(Error::Mismatch(format!(
            "plan for step {} at depth {}",
            plan.step,
            node.steps_taken()
        )));
    }
    if (plan.r - kraus.r()).abs() > 1e-15 {
        return Err(Error::Mismatch(format!(
            "plan r = {} but operators built for r = {}",
            plan.r,
            kraus.r()
        )));
    }
    let outcomes = kraus.k_max() + 1;
    let mut children: Vec<BranchNode> = (0..outcomes)
        .map(|k| BranchNode {
            record: node
                .record
                .iter()
                .copied()
                .chain([k.min(u8::MAX as usize) as u8])
                .collect(),
            states: [None, None],
            probs: [0.0; 2],
            design: DesignState {
                states: [None, None],
                log_weights: [f64::NEG_INFINITY; 2],
            },
        })
        .collect();
    let mut overflow = [0.0; 2];
    for (h, lost) in overflow.iter_mut().enumerate() {
        let Some(v) = &node.states[h] else { continue };
        let mut total = 0.0;
        for (k, child) in children.iter_mut().enumerate() {
            let (s, p) = branch(v, kraus, k);
            child.states[h] = s;
            child.probs[h] = node.probs[h] * p;
            total += p;
        }
        if total > 1.0 + PROB_TOL {
            return Err(Error::Mismatch(format!(
                "outcome probabilities sum to {total}"
            )));
        }
        *lost = node.probs[h] * (1.0 - total).max(0.0);
    }
    for h in 0..2 {
        let Some(v) = &node.design.states[h] else {
            continue;
        };
        for (k, child) in children.iter_mut().enumerate() {
            let (s, p) = branch(v, kraus, k);
            child.design.states[h] = s;
            child.design.log_weights[h] = node.design.log_weights[h] + p.ln();
        }
    }
    Ok(StepResult { children, overflow })
}
