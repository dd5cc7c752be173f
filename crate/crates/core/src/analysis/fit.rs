use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::read_csv;
use crate::engine::Z95;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    /// Allowed distance from the expected slope for a generic pair.
    pub slope_tol_generic: f64,
    /// Same, for a pair planned in a rotated basis.
    pub slope_tol_degenerate: f64,
    /// Allowed distance of the failure slope from `-1`.
    pub fail_slope_tol: f64,
    /// A point enters the fit only if `p > min_snr * half_width`.
    pub min_snr: f64,
    /// Every estimate at or below this makes the sweep "exact zero".
    pub zero_tol: f64,
    /// Smallest relative standard error given to a point, so exact values
    /// do not receive unbounded weight.
    pub sigma_floor: f64,
    pub z: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            slope_tol_generic: 0.3,
            slope_tol_degenerate: 0.15,
            fail_slope_tol: 0.4,
            min_snr: 10.0,
            zero_tol: 1e-10,
            sigma_floor: 0.005,
            z: Z95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitPoint {
    pub n: usize,
    pub p: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitVerdict {
    Pass,
    Fail,
    /// All estimates vanish; there is nothing to fit.
    ExactZero,
}

/// Weighted least-squares fit of `ln p = intercept + slope ln N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub slope_stderr: Option<f64>,
    pub expected_slope: f64,
    pub tolerance: f64,
    pub verdict: FitVerdict,
    /// N values that entered the fit.
    pub used: Vec<usize>,
    /// N values left out because their interval dominated the estimate.
    pub excluded: Vec<usize>,
}

impl ScalingFit {
    /// `slope -/+ z * stderr`.
    pub fn slope_interval(&self, z: f64) -> Option<(f64, f64)> {
        Some((
            self.slope? - z * self.slope_stderr?,
            self.slope? + z * self.slope_stderr?,
        ))
    }

    pub fn passed(&self) -> bool {
        self.verdict != FitVerdict::Fail
    }
}

pub fn fit_power_law(
    points: &[FitPoint],
    expected: f64,
    tolerance: f64,
    cfg: &FitConfig,
) -> Result<ScalingFit> {
    let mut fit = ScalingFit {
        slope: None,
        intercept: None,
        r_squared: None,
        slope_stderr: None,
        expected_slope: expected,
        tolerance,
        verdict: FitVerdict::ExactZero,
        used: Vec::new(),
        excluded: Vec::new(),
    };
    if !points.is_empty() && points.iter().all(|p| p.p <= cfg.zero_tol) {
        fit.excluded = points.iter().map(|p| p.n).collect();
        return Ok(fit);
    }
    let mut data = Vec::new();
    for p in points {
        if p.n > 0 && p.p > 0.0 && p.p > cfg.min_snr * p.half_width {
            let sigma = (p.half_width / (cfg.z * p.p)).max(cfg.sigma_floor);
            data.push(((p.n as f64).ln(), p.p.ln(), sigma.powi(-2)));
            fit.used.push(p.n);
        } else {
            fit.excluded.push(p.n);
        }
    }
    if data.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable points (excluded N = {:?}), need 3",
            data.len(),
            fit.excluded
        )));
    }
    let sw: f64 = data.iter().map(|d| d.2).sum();
    let mx = data.iter().map(|d| d.2 * d.0).sum::<f64>() / sw;
    let my = data.iter().map(|d| d.2 * d.1).sum::<f64>() / sw;
    let sxx: f64 = data.iter().map(|d| d.2 * (d.0 - mx).powi(2)).sum();
    let sxy: f64 = data.iter().map(|d| d.2 * (d.0 - mx) * (d.1 - my)).sum();
    let syy: f64 = data.iter().map(|d| d.2 * (d.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = data
        .iter()
        .map(|d| d.2 * (d.1 - intercept - slope * d.0).powi(2))
        .sum();
    fit.slope = Some(slope);
    fit.intercept = Some(intercept);
    fit.r_squared = Some(if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 });
    fit.slope_stderr = Some(sxx.recip().sqrt());
    fit.verdict = if (slope - expected).abs() <= tolerance {
        FitVerdict::Pass
    } else {
        FitVerdict::Fail
    };
    Ok(fit)
}

/// Refit the error column of a sweep CSV.
pub fn cmd_fit(
    csv: impl AsRef<Path>,
    expected: f64,
    tolerance: f64,
    cfg: &FitConfig,
) -> Result<ScalingFit> {
    let rows = read_csv(std::fs::File::open(csv)?)?;
    let points: Vec<FitPoint> = rows.iter().map(|r| r.error_point()).collect();
    fit_power_law(&points, expected, tolerance, cfg)
}
