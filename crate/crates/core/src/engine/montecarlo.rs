use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::decision::{decide_oriented, error_weight, Decision, FailurePolicy};
use super::stats::wilson;
use super::trajectory::Trajectory;
use super::{EngineConfig, ErrorEstimate, Method};
use crate::error::{Error, Result};
use crate::fock::{Hypothesis, StatePair};
use crate::receiver::beta::cap_limit;
use crate::receiver::{Orientation, Planner};

/// Draws trajectories for one planner. Trajectory `i` uses its own ChaCha
/// stream of the base seed, so results do not depend on scheduling.
pub struct Sampler<'a> {
    planner: &'a Planner,
    seed: u64,
}

impl<'a> Sampler<'a> {
    pub fn new(planner: &'a Planner, seed: u64) -> Self {
        Self { planner, seed }
    }

    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Run trajectory `index`; `forced` fixes the hypothesis instead of
    /// drawing it fairly.
    pub fn run(&self, index: u64, forced: Option<Hypothesis>) -> Result<Trajectory> {
        let planner = self.planner;
        let n = planner.steps();
        let mut rng = self.rng(index);
        let hypothesis = forced.unwrap_or_else(|| {
            if rng.random::<bool>() {
                Hypothesis::Phi
            } else {
                Hypothesis::Psi
            }
        });
        let h = hypothesis.index();

        let mut design = planner.initial_design();
        // a rotated design basis needs the true state carried separately
        let mut truth = planner
            .is_perturbed()
            .then(|| planner.truth().state(hypothesis).clone());
        let mut traj = Trajectory {
            record: Vec::with_capacity(n),
            betas: Vec::with_capacity(n),
            hypothesis,
            decision: Decision::Failure,
            weight: 1.0,
            clamped: 0,
        };

        for step in 1..=n {
            let (plan, kraus) = planner.plan(step, &design)?;
            traj.betas.push(plan.beta);
            traj.clamped += plan.clamped as u32;
            let current = truth
                .as_ref()
                .or(design.states[h].as_ref())
                .ok_or_else(|| Error::Mismatch("true state excluded by its own record".into()))?;

            let u: f64 = rng.random();
            let w0 = kraus.apply(0, current);
            let p0 = w0.norm_sqr();
            let (k, w, p) = if u < p0 {
                (0, w0, p0)
            } else {
                let w1 = kraus.apply(1, current);
                let p1 = w1.norm_sqr();
                if u < p0 + p1 {
                    (1, w1, p1)
                } else {
                    traj.record.push(2);
                    traj.weight *= (1.0 - p0 - p1).max(0.0);
                    return Ok(traj);
                }
            };
            traj.record.push(k as u8);
            traj.weight *= p;
            if step == n {
                traj.decision = decide_oriented(k, plan.orientation.unwrap_or(Orientation::Direct));
                break;
            }

            let next = w.scaled(C64::new(p.sqrt().recip(), 0.0));
            for i in 0..2 {
                if truth.is_none() && i == h {
                    continue;
                }
                let Some(v) = &design.states[i] else { continue };
                let wi = kraus.apply(k, v);
                let pi = wi.norm_sqr();
                design.log_weights[i] += pi.ln();
                design.states[i] = (pi > 0.0).then(|| wi.scaled(C64::new(pi.sqrt().recip(), 0.0)));
            }
            match &mut truth {
                Some(t) => *t = next,
                None => {
                    design.log_weights[h] += p.ln();
                    design.states[h] = Some(next);
                }
            }
        }
        Ok(traj)
    }
}

#[derive(Debug, Clone, Copy)]
struct Tally {
    /// Errors in half-units so the coin policy sums exactly.
    error_halves: u64,
    failures: u64,
    max_beta_sq: f64,
    clamped: u64,
}

impl Tally {
    fn empty() -> Self {
        Self {
            error_halves: 0,
            failures: 0,
            max_beta_sq: 0.0,
            clamped: 0,
        }
    }

    fn add(mut self, t: &Trajectory, policy: FailurePolicy) -> Self {
        self.error_halves += (2.0 * error_weight(t.decision, t.hypothesis, policy)).round() as u64;
        self.failures += (t.decision == Decision::Failure) as u64;
        self.max_beta_sq = t
            .betas
            .iter()
            .map(|b| b.norm_sqr())
            .fold(self.max_beta_sq, f64::max);
        self.clamped += t.clamped as u64;
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            error_halves: self.error_halves + o.error_halves,
            failures: self.failures + o.failures,
            max_beta_sq: self.max_beta_sq.max(o.max_beta_sq),
            clamped: self.clamped + o.clamped,
        }
    }
}

fn planner_for(pair: &StatePair, n: usize, cfg: &EngineConfig) -> Result<Planner> {
    cfg.validate()?;
    cfg.check_truncation(pair)?;
    Planner::new(pair, n, &cfg.receiver)
}

/// Monte Carlo estimate of the average error probability with a Wilson
/// interval. Bit-for-bit reproducible for a given seed, on any thread count.
pub fn mc_error_probability(
    pair: &StatePair,
    n: usize,
    samples: u64,
    seed: u64,
    cfg: &EngineConfig,
) -> Result<ErrorEstimate> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 samples, got {samples}"
        )));
    }
    let planner = planner_for(pair, n, cfg)?;
    let sampler = Sampler::new(&planner, seed);
    let policy = cfg.failure_policy;
    let t = (0..samples)
        .into_par_iter()
        .map(|i| sampler.run(i, None))
        .try_fold(Tally::empty, |acc, t| t.map(|t| acc.add(&t, policy)))
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;

    let total = samples as f64;
    let p_err = t.error_halves as f64 / (2.0 * total);
    let (ci_low, ci_high) = wilson(p_err * total, total, cfg.z);
    let (fail_ci_low, fail_ci_high) = wilson(t.failures as f64, total, cfg.z);
    Ok(ErrorEstimate {
        n,
        method: Method::MonteCarlo,
        p_err,
        ci_low,
        ci_high,
        p_fail: t.failures as f64 / total,
        fail_ci_low,
        fail_ci_high,
        pruned_mass: 0.0,
        samples: Some(samples),
        seed: Some(seed),
        truncation_deficit: pair.discarded_norm(),
        cap_margin: cap_limit(planner.cap(), n, cfg.receiver.cap_slack) - t.max_beta_sq,
        clamped_steps: t.clamped,
        delta: planner.delta(),
        config: *cfg,
    })
}

/// The trajectories behind [`mc_error_probability`] with the same seed, in
/// index order; `forced` fixes the hypothesis.
pub fn sample_trajectories(
    pair: &StatePair,
    n: usize,
    samples: u64,
    seed: u64,
    forced: Option<Hypothesis>,
    cfg: &EngineConfig,
) -> Result<Vec<Trajectory>> {
    let planner = planner_for(pair, n, cfg)?;
    let sampler = Sampler::new(&planner, seed);
    (0..samples)
        .into_par_iter()
        .map(|i| sampler.run(i, forced))
        .collect()
}

/// Record probability of `record` under both hypotheses, replaying the
/// planner along it.
#[cfg(test)]
fn replay_probability(planner: &Planner, record: &[u8]) -> Result<[f64; 2]> {
    let mut design = planner.initial_design();
    let mut states: [Option<crate::FockVector>; 2] = [
        Some(planner.truth().psi().clone()),
        Some(planner.truth().phi().clone()),
    ];
    let mut probs = [1.0; 2];
    for (i, &k) in record.iter().enumerate() {
        let (_, kraus) = planner.plan(i + 1, &design)?;
        for (s, p) in states.iter_mut().zip(probs.iter_mut()) {
            if let Some(v) = s {
                let w = kraus.apply(k as usize, v);
                let q = w.norm_sqr();
                *p *= q;
                *s = (q > 0.0).then(|| w.scaled(C64::new(q.sqrt().recip(), 0.0)));
            }
        }
        for j in 0..2 {
            if let Some(v) = &design.states[j] {
                let w = kraus.apply(k as usize, v);
                let q = w.norm_sqr();
                design.log_weights[j] += q.ln();
                design.states[j] = (q > 0.0).then(|| w.scaled(C64::new(q.sqrt().recip(), 0.0)));
            }
        }
    }
    Ok(probs)
}
