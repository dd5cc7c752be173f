use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::engine::{decide_oriented, run_step, BranchNode, Decision, EngineConfig};
use crate::error::{Error, Result};
use crate::fock::{PairFile, StatePair};
use crate::receiver::{Orientation, PlanSource, Planner};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleStep {
    pub step: usize,
    pub r: f64,
    pub k: u8,
    pub x: Option<C64>,
    pub beta: C64,
    pub source: PlanSource,
    pub degenerate: bool,
    /// `|<psi|phi>|` of the conditional states entering the step; absent once
    /// a hypothesis is excluded.
    pub overlap: Option<f64>,
    /// Probability of `k` at this step under each hypothesis.
    pub step_probs: [f64; 2],
    /// Probability of the record so far under each hypothesis.
    pub cumulative: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub delta: Option<f64>,
    pub inputs: PairFile,
    pub steps: Vec<OracleStep>,
    /// Present when the record covers all N steps.
    pub decision: Option<Decision>,
}

/// Replay one detection record along the feedforward plan.
pub fn cmd_oracle(
    pair: &StatePair,
    n: usize,
    record: &[u8],
    cfg: &EngineConfig,
) -> Result<OracleReport> {
    if record.len() > n {
        return Err(Error::InvalidParameter(format!(
            "record of length {} for N = {n}",
            record.len()
        )));
    }
    if let Some(i) = record.iter().position(|&k| k > 1) {
        return Err(Error::InvalidParameter(format!(
            "step {}: a run ends at its first multi-photon count",
            i + 1
        )));
    }
    let planner = Planner::new(pair, n, &cfg.receiver)?;
    let mut node = BranchNode::root(pair, planner.initial_design());
    let mut steps = Vec::with_capacity(record.len());
    let mut decision = None;
    for (i, &k) in record.iter().enumerate() {
        let (plan, kraus) = planner.plan(i + 1, &node.design)?;
        let overlap = match &node.states {
            [Some(a), Some(b)] => Some(a.dot(b).norm()),
            _ => None,
        };
        let mut res = run_step(&node, &plan, &kraus)?;
        let child = res.children.swap_remove(k as usize);
        if child.probs == [0.0, 0.0] {
            return Err(Error::ImpossibleRecord { step: i + 1 });
        }
        let ratio = |h: usize| {
            if node.probs[h] > 0.0 {
                child.probs[h] / node.probs[h]
            } else {
                0.0
            }
        };
        steps.push(OracleStep {
            step: i + 1,
            r: plan.r,
            k,
            x: plan.x,
            beta: plan.beta,
            source: plan.source,
            degenerate: plan.degenerate,
            overlap,
            step_probs: [ratio(0), ratio(1)],
            cumulative: child.probs,
        });
        if i + 1 == n {
            decision = Some(decide_oriented(
                k as usize,
                plan.orientation.unwrap_or(Orientation::Direct),
            ));
        }
        node = child;
    }
    Ok(OracleReport {
        n,
        delta: planner.delta(),
        inputs: PairFile::from_pair(pair),
        steps,
        decision,
    })
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "N = {}{}",
            self.n,
            self.delta
                .map(|d| format!(", rotated design delta = {d:.6}"))
                .unwrap_or_default()
        )?;
        writeln!(
            f,
            "{:>5} {:>2} {:>9} {:>24} {:>11} {:>11} {:>11} {:>11} {:>11}",
            "step", "k", "r", "beta", "overlap", "p_k|psi", "p_k|phi", "P(psi)", "P(phi)"
        )?;
        for s in &self.steps {
            let overlap = s
                .overlap
                .map(|o| format!("{o:.4e}"))
                .unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:>5} {:>2} {:>9.6} {:>11.6}{:+11.6}i {:>11} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
                s.step, s.k, s.r, s.beta.re, s.beta.im, overlap, s.step_probs[0], s.step_probs[1], s.cumulative[0], s.cumulative[1]
            )?;
        }
        if let Some(d) = self.decision {
            writeln!(f, "decision: {d:?}")?;
        }
        Ok(())
    }
}
