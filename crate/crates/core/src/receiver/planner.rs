//! Per-step feedforward: given the conditional design pair after a partial
//! record, choose the reflectance and displacement of the next step.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::beta::{
    analyze_x, cap_limit, refine_displacement, tap_displacement, DegeneracyReport, Verdict,
};
use super::decomposition::decompose;
use super::final_step::{plan_final_bounded, FinalPlan, Orientation};
use super::perturb::{perturbed_basis, PerturbationConfig};
use crate::error::{Error, Result};
use crate::fock::{FockVector, StatePair};
use crate::operators::kraus::KrausFamily;
use crate::operators::tap::TapTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReceiverConfig {
    #[serde(flatten)]
    pub perturbation: PerturbationConfig,
    pub deg_tol: f64,
    /// Displacement cap as a multiple of the larger input `sqrt(<n>)`.
    pub beta_cap_factor: f64,
    pub cap_slack: f64,
    /// Polish each analytic displacement numerically.
    pub refine: bool,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self {
            perturbation: PerturbationConfig::default(),
            deg_tol: super::beta::DEFAULT_DEG_TOL,
            beta_cap_factor: 4.0,
            cap_slack: super::beta::DEFAULT_CAP_SLACK,
            refine: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanSource {
    Analytic,
    Refined,
    /// No usable design pair (a branch of probability zero); `beta = 0`.
    Idle,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepPlan {
    /// 1-based step index.
    pub step: usize,
    pub r: f64,
    pub beta: C64,
    pub beta_cap: f64,
    pub degenerate: bool,
    pub source: PlanSource,
    /// The analytic displacement exceeded the cap and was scaled back.
    pub clamped: bool,
    pub x: Option<C64>,
    pub report: Option<DegeneracyReport>,
    pub orientation: Option<Orientation>,
}

impl StepPlan {
    /// `cap^2 + slack/N - |beta|^2`; negative only on a violated cap.
    pub fn cap_margin(&self, n: usize, slack: f64) -> f64 {
        cap_limit(self.beta_cap, n, slack) - self.beta.norm_sqr()
    }
}

/// Conditional design state handed to the planner: normalised vectors (or
/// `None` once a hypothesis has been excluded) and log record weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignState {
    pub states: [Option<FockVector>; 2],
    pub log_weights: [f64; 2],
}

/// Plans every step of an `n`-step run for one input pair.
#[derive(Debug, Clone)]
pub struct Planner {
    truth: StatePair,
    design: StatePair,
    delta: Option<f64>,
    n: usize,
    cap: f64,
    cfg: ReceiverConfig,
    taps: Vec<Arc<TapTable>>,
}

impl Planner {
    /// Degeneracy is judged on the input pair at the first step; a
    /// degenerate pair is planned in the rotated basis with `delta = N^{-Delta}`.
    pub fn new(pair: &StatePair, n: usize, cfg: &ReceiverConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one step".into()));
        }
        cfg.perturbation.validate()?;
        let cap = cfg.beta_cap_factor * pair.max_mean_amplitude();
        let degenerate = n >= 2 && {
            let d = decompose(pair.psi(), pair.phi(), 1.0 / n as f64)?;
            analyze_x(&d, cfg.deg_tol).report.verdict == Verdict::Degenerate
        };
        let (design, delta) = if degenerate {
            let delta = cfg.perturbation.delta(n);
            (perturbed_basis(pair, delta)?, Some(delta))
        } else {
            (pair.clone(), None)
        };
        let taps = (1..=n)
            .map(|i| TapTable::shared(1.0 / (n - i + 1) as f64, pair.cutoff()))
            .collect::<Result<_>>()?;
        Ok(Self {
            truth: pair.clone(),
            design,
            delta,
            n,
            cap,
            cfg: *cfg,
            taps,
        })
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn truth(&self) -> &StatePair {
        &self.truth
    }

    pub fn design(&self) -> &StatePair {
        &self.design
    }

    /// Whether planning uses a rotated design basis.
    pub fn is_perturbed(&self) -> bool {
        self.delta.is_some()
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn config(&self) -> &ReceiverConfig {
        &self.cfg
    }

    /// `r_i = 1/(N - i + 1)`.
    pub fn reflectance(&self, step: usize) -> f64 {
        self.taps[step - 1].r()
    }

    pub fn initial_design(&self) -> DesignState {
        DesignState {
            states: [
                Some(self.design.psi().clone()),
                Some(self.design.phi().clone()),
            ],
            log_weights: [0.0; 2],
        }
    }

    fn gamma_radius(&self) -> f64 {
        cap_limit(self.cap, self.n, self.cfg.cap_slack).sqrt() / (self.n as f64).sqrt()
    }

    /// Plan step `step` (1-based) and build its Kraus family (outcomes 0, 1).
    pub fn plan(&self, step: usize, design: &DesignState) -> Result<(StepPlan, KrausFamily)> {
        if step == 0 || step > self.n {
            return Err(Error::Mismatch(format!(
                "step {step} outside 1..={}",
                self.n
            )));
        }
        let root = (self.n as f64).sqrt();
        let tap = &self.taps[step - 1];
        let mut plan = StepPlan {
            step,
            r: tap.r(),
            beta: C64::new(0.0, 0.0),
            beta_cap: self.cap,
            degenerate: false,
            source: PlanSource::Idle,
            clamped: false,
            x: None,
            report: None,
            orientation: None,
        };

        if step == self.n {
            let fin = self.plan_final(design)?;
            plan.beta = fin.beta;
            plan.source = PlanSource::Final;
            plan.orientation = Some(fin.orientation);
            return Ok((plan, KrausFamily::from_table(tap.clone(), fin.gamma, 1)));
        }

        let mut gamma = C64::new(0.0, 0.0);
        if let [Some(p), Some(q)] = &design.states {
            let d = decompose(p, q, tap.r())?;
            let an = analyze_x(&d, self.cfg.deg_tol);
            plan.report = Some(an.report);
            plan.degenerate = an.report.verdict == Verdict::Degenerate;
            plan.source = PlanSource::Analytic;
            if !plan.degenerate {
                plan.x = Some(an.x);
                gamma = tap_displacement(an.x);
                let radius = self.gamma_radius();
                if gamma.norm() > radius {
                    gamma *= radius / gamma.norm();
                    plan.clamped = true;
                }
                if self.cfg.refine {
                    let refined = refine_displacement(p, q, tap, gamma, radius)?;
                    if refined.improved {
                        gamma = refined.gamma;
                        plan.source = PlanSource::Refined;
                    }
                }
            }
        }
        plan.beta = gamma * root;
        Ok((plan, KrausFamily::from_table(tap.clone(), gamma, 1)))
    }

    /// Weighted final alignment; an excluded hypothesis carries zero weight.
    fn plan_final(&self, design: &DesignState) -> Result<FinalPlan> {
        let top = design
            .states
            .iter()
            .zip(design.log_weights)
            .filter(|(s, _)| s.is_some())
            .map(|(_, w)| w)
            .fold(f64::NEG_INFINITY, f64::max);
        let weighted = |i: usize| match &design.states[i] {
            Some(v) => v.scaled(C64::new((0.5 * (design.log_weights[i] - top)).exp(), 0.0)),
            None => FockVector::zeros(self.truth.cutoff()),
        };
        plan_final_bounded(&weighted(0), &weighted(1), self.n, self.gamma_radius())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::presets;

    #[test]
    fn reflectances_run_up_to_one() {
        let planner = Planner::new(
            &presets::cat(1.0, 24).unwrap(),
            8,
            &ReceiverConfig::default(),
        )
        .unwrap();
        let r: Vec<f64> = (1..=8).map(|i| planner.reflectance(i)).collect();
        assert_eq!(r[0], 1.0 / 8.0);
        assert_eq!(r[6], 0.5);
        assert_eq!(r[7], 1.0);
        // each step taps an equal share of the original light
        let mut left = 1.0;
        for ri in r {
            assert!((left * ri - 1.0 / 8.0).abs() < 1e-15);
            left *= 1.0 - ri;
        }
    }

    #[test]
    fn degenerate_pair_switches_to_rotated_design() {
        let planner =
            Planner::new(&presets::plus_minus(24), 27, &ReceiverConfig::default()).unwrap();
        assert!(planner.is_perturbed());
        assert!((planner.delta().unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let (plan, _) = planner.plan(1, &planner.initial_design()).unwrap();
        assert!(!plan.degenerate);
        assert!(plan.x.is_some());

        let plain = Planner::new(
            &presets::cat(1.0, 24).unwrap(),
            27,
            &ReceiverConfig::default(),
        )
        .unwrap();
        assert!(!plain.is_perturbed());
    }

    #[test]
    fn planned_betas_respect_cap() {
        let pair = presets::random(
            &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2),
            24,
            1.0,
        );
        for n in [4usize, 32, 256] {
            let planner = Planner::new(&pair, n, &ReceiverConfig::default()).unwrap();
            let (plan, _) = planner.plan(1, &planner.initial_design()).unwrap();
            assert!(plan.cap_margin(n, 1.0) >= -1e-12);
        }
    }

    #[test]
    fn config_reads_documented_keys() {
        let cfg: ReceiverConfig =
            serde_json::from_str(r#"{"Delta": 0.25, "deg_tol": 1e-7, "beta_cap_factor": 3.0}"#)
                .unwrap();
        assert_eq!(cfg.perturbation.delta_exp, 0.25);
        assert_eq!(cfg.deg_tol, 1e-7);
        assert_eq!(cfg.beta_cap_factor, 3.0);
        assert!(!cfg.refine);
    }
}
