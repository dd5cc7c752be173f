use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::trajectory::Trajectory;
use crate::error::{Error, Result};

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: f64, trials: f64, z: f64) -> (f64, f64) {
    if trials <= 0.0 {
        return (0.0, 1.0);
    }
    let p = (successes / trials).clamp(0.0, 1.0);
    let z2 = z * z;
    let denom = 1.0 + z2 / trials;
    let center = (p + z2 / (2.0 * trials)) / denom;
    let half = z / denom * (p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)).sqrt();
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Local-oscillator power of a run split into a common displacement and the
/// auxiliary remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonBudget {
    /// `|sum(beta_i)/N|^2`.
    pub beta0_sq: f64,
    /// `sum(|beta_i|^2)/N - beta0_sq`.
    pub beta_aux_sq: f64,
}

const BUDGET_RTOL: f64 = 1e-12;

/// Budget of one run's displacements.
pub fn photon_budget(betas: &[C64]) -> Result<PhotonBudget> {
    if betas.is_empty() {
        return Err(Error::InsufficientData("no displacements".into()));
    }
    let n = betas.len() as f64;
    let mean = betas.iter().sum::<C64>() / n;
    let power = betas.iter().map(|b| b.norm_sqr()).sum::<f64>() / n;
    let beta0_sq = mean.norm_sqr();
    let aux = power - beta0_sq;
    if aux < -BUDGET_RTOL * power.max(f64::MIN_POSITIVE) {
        return Err(Error::Domain(format!("negative auxiliary power {aux}")));
    }
    Ok(PhotonBudget {
        beta0_sq,
        beta_aux_sq: aux.max(0.0),
    })
}

/// Budget averaged over complete trajectories; failed runs are skipped.
pub fn mean_photon_budget(trajectories: &[Trajectory], n: usize) -> Result<PhotonBudget> {
    let mut sum = PhotonBudget {
        beta0_sq: 0.0,
        beta_aux_sq: 0.0,
    };
    let mut count = 0usize;
    for t in trajectories.iter().filter(|t| t.betas.len() == n) {
        let b = photon_budget(&t.betas)?;
        sum.beta0_sq += b.beta0_sq;
        sum.beta_aux_sq += b.beta_aux_sq;
        count += 1;
    }
    if count == 0 {
        return Err(Error::InsufficientData("no complete trajectories".into()));
    }
    Ok(PhotonBudget {
        beta0_sq: sum.beta0_sq / count as f64,
        beta_aux_sq: sum.beta_aux_sq / count as f64,
    })
}

/// Fewest trajectories accepted by [`one_click_statistics`].
pub const MIN_TRAJECTORIES: usize = 1000;

/// Survival points with fewer events than this are left out of the tail fit.
const TAIL_MIN_EVENTS: u64 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClickStatistics {
    /// `histogram[j]` counts trajectories with exactly `j` single-photon steps.
    pub histogram: Vec<u64>,
    pub total: u64,
    /// Least-squares slope of `ln P[J >= j]` against `j`, over `j >= 1`
    /// with enough events; `None` when fewer than two such points exist.
    pub tail_slope: Option<f64>,
}

impl ClickStatistics {
    /// `P[J >= j]`.
    pub fn survival(&self, j: usize) -> f64 {
        self.histogram.iter().skip(j).sum::<u64>() as f64 / self.total as f64
    }

    pub fn mean(&self) -> f64 {
        self.histogram
            .iter()
            .enumerate()
            .map(|(j, &c)| j as f64 * c as f64)
            .sum::<f64>()
            / self.total as f64
    }
}

/// Distribution of the number of single-photon counts per trajectory.
pub fn one_click_statistics(trajectories: &[Trajectory]) -> Result<ClickStatistics> {
    if trajectories.len() < MIN_TRAJECTORIES {
        return Err(Error::InsufficientData(format!(
            "{} trajectories, need {MIN_TRAJECTORIES}",
            trajectories.len()
        )));
    }
    let mut histogram = Vec::new();
    for t in trajectories {
        let j = t.ones();
        if histogram.len() <= j {
            histogram.resize(j + 1, 0);
        }
        histogram[j] += 1;
    }
    let total = trajectories.len() as u64;
    let points: Vec<(f64, f64)> = (1..histogram.len())
        .filter_map(|j| {
            let events: u64 = histogram[j..].iter().sum();
            (events >= TAIL_MIN_EVENTS).then(|| (j as f64, (events as f64 / total as f64).ln()))
        })
        .collect();
    let tail_slope = (points.len() >= 2).then(|| least_squares_slope(&points));
    Ok(ClickStatistics {
        histogram,
        total,
        tail_slope,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    sxy / sxx
}
