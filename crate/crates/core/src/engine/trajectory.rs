use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::decision::Decision;
use crate::error::Result;
use crate::fock::Hypothesis;

/// One sampled run. A run stops at the first multi-photon count, so the
/// record of a failed run is shorter than N and ends with that count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub record: Vec<u8>,
    pub betas: Vec<C64>,
    pub hypothesis: Hypothesis,
    pub decision: Decision,
    /// Probability of the record under the true hypothesis.
    pub weight: f64,
    #[serde(skip)]
    pub clamped: u32,
}

impl Trajectory {
    /// Number of steps that counted exactly one photon.
    pub fn ones(&self) -> usize {
        self.record.iter().filter(|&&k| k == 1).count()
    }

    pub fn zeros(&self) -> usize {
        self.record.iter().filter(|&&k| k == 0).count()
    }

    pub fn is_error(&self) -> bool {
        self.decision != Decision::from(self.hypothesis)
    }
}

pub fn write_jsonl<W: Write>(mut out: W, trajectories: &[Trajectory]) -> Result<()> {
    for t in trajectories {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<Trajectory>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
