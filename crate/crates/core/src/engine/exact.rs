use rayon::prelude::*;

use super::decision::{decide_oriented, error_weight};
use super::node::{run_step, BranchNode};
use super::{EngineConfig, ErrorEstimate, Method};
use crate::error::{Error, Result};
use crate::fock::{Hypothesis, StatePair};
use crate::receiver::{Orientation, Planner};

/// Subtrees above this depth are explored in parallel.
const PARALLEL_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy)]
struct Tally {
    error: f64,
    fail: f64,
    pruned: f64,
    cap_margin: f64,
    clamped: u64,
}

impl Tally {
    fn empty() -> Self {
        Self {
            error: 0.0,
            fail: 0.0,
            pruned: 0.0,
            cap_margin: f64::INFINITY,
            clamped: 0,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            error: self.error + o.error,
            fail: self.fail + o.fail,
            pruned: self.pruned + o.pruned,
            cap_margin: self.cap_margin.min(o.cap_margin),
            clamped: self.clamped + o.clamped,
        }
    }
}

struct Walk<'a> {
    planner: &'a Planner,
    cfg: &'a EngineConfig,
}

impl Walk<'_> {
    fn explore(&self, node: &BranchNode) -> Result<Tally> {
        let n = self.planner.steps();
        let step = node.steps_taken() + 1;
        let (plan, kraus) = self.planner.plan(step, &node.design)?;
        let res = run_step(node, &plan, &kraus)?;

        let mut t = Tally::empty();
        t.cap_margin = plan.cap_margin(n, self.cfg.receiver.cap_slack);
        t.clamped = plan.clamped as u64;
        let failed = 0.5 * (res.overflow[0] + res.overflow[1]);
        t.fail += failed;
        t.error += failed * self.cfg.failure_policy.error_weight();

        if step == n {
            let orientation = plan.orientation.unwrap_or(Orientation::Direct);
            for (k, child) in res.children.iter().enumerate() {
                let d = decide_oriented(k, orientation);
                for h in Hypothesis::BOTH {
                    t.error +=
                        0.5 * child.probs[h.index()] * error_weight(d, h, self.cfg.failure_policy);
                }
            }
            return Ok(t);
        }

        let mut live = Vec::with_capacity(res.children.len());
        for child in res.children {
            if child.max_prob() < self.cfg.p_min {
                t.pruned += 0.5 * (child.probs[0] + child.probs[1]);
            } else {
                live.push(child);
            }
        }
        let subtrees: Vec<Tally> = if step <= PARALLEL_DEPTH {
            live.par_iter()
                .map(|c| self.explore(c))
                .collect::<Result<_>>()?
        } else {
            live.iter()
                .map(|c| self.explore(c))
                .collect::<Result<_>>()?
        };
        Ok(subtrees.into_iter().fold(t, Tally::merge))
    }
}

/// Sum the error probability over every detection record, depth first, with
/// the displacement of each step planned from that branch's conditional pair.
///
/// Pruned records may or may not be errors, so the reported interval is
/// `[p_err, p_err + pruned_mass]`.
pub fn exact_error_probability(
    pair: &StatePair,
    n: usize,
    cfg: &EngineConfig,
) -> Result<ErrorEstimate> {
    cfg.validate()?;
    if n > cfg.n_exact_max {
        return Err(Error::InvalidParameter(format!(
            "N = {n} exceeds n_exact_max = {}",
            cfg.n_exact_max
        )));
    }
    cfg.check_truncation(pair)?;
    let planner = Planner::new(pair, n, &cfg.receiver)?;
    let root = BranchNode::root(pair, planner.initial_design());
    let t = Walk {
        planner: &planner,
        cfg,
    }
    .explore(&root)?;
    if t.pruned > cfg.interval_budget {
        return Err(Error::PrunedMass {
            pruned: t.pruned,
            budget: cfg.interval_budget,
        });
    }
    let p_err = t.error.clamp(0.0, 1.0);
    let p_fail = t.fail.clamp(0.0, 1.0);
    Ok(ErrorEstimate {
        n,
        method: Method::Exact,
        p_err,
        ci_low: p_err,
        ci_high: (p_err + t.pruned).min(1.0),
        p_fail,
        fail_ci_low: p_fail,
        fail_ci_high: (p_fail + t.pruned).min(1.0),
        pruned_mass: t.pruned,
        samples: None,
        seed: None,
        truncation_deficit: pair.discarded_norm(),
        cap_margin: t.cap_margin,
        clamped_steps: t.clamped,
        delta: planner.delta(),
        config: *cfg,
    })
}
