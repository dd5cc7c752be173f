use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::fock::{certify_tail, FockVector, DEFAULT_CUTOFF};
use crate::operators::bounds::{
    binomial_grid, convolution_grid, displaced_tail_grid, laguerre_grid, pk_bound_grid, GridReport,
    PkReport, DISPLACED_PAD,
};
use crate::operators::displacement::displace_into;
use crate::operators::step_kraus;
use crate::special::ln_factorial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidateConfig {
    pub cutoff: usize,
    pub beta_cap_factor: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_CUTOFF,
            beta_cap_factor: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub config: ValidateConfig,
    pub grids: Vec<GridReport>,
    pub pk: Vec<PkReport>,
    pub passed: bool,
    /// SHA-256 of the report serialised with this field empty.
    pub hash: String,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &GridReport> {
        self.grids.iter().filter(|g| !g.passed())
    }
}

/// `|<n|D(beta)|0>|^2` against the Poisson law with mean `|beta|^2`.
fn coherent_grid(cutoff: usize) -> GridReport {
    let mut rep = GridReport::new("coherent_closed_form");
    let big = cutoff + DISPLACED_PAD;
    for &mag in &[0.3, 0.7, 1.5] {
        let beta = C64::new(mag, 0.0);
        let out = displace_into(&FockVector::basis(big, 0), beta, big);
        let tail = certify_tail(&out);
        rep.record(
            if tail.is_certified() { 0.0 } else { 1.0 },
            0.5,
            0.0,
            || format!("|beta|={mag}: uncertified"),
        );
        let mean = mag * mag;
        for n in 0..=cutoff {
            let poisson = (-mean + n as f64 * mean.ln() - ln_factorial(n as u64)).exp();
            let diff = (out.amp(n).norm_sqr() - poisson).abs();
            rep.record(diff, 1e-13, 0.0, || format!("|beta|={mag} n={n}"));
        }
    }
    rep
}

/// `D(0)` leaves tail profiles unchanged.
fn identity_displacement_grid(cutoff: usize) -> GridReport {
    let mut rep = GridReport::new("zero_displacement");
    for (name, v) in crate::operators::bounds::tail_inputs(cutoff) {
        let out = displace_into(&v, C64::new(0.0, 0.0), cutoff);
        let (a, b) = (certify_tail(&v), certify_tail(&out));
        rep.record(out.max_abs_diff(&v), 1e-15, 0.0, || {
            format!("{name}: amplitudes")
        });
        let same = a.x.to_bits() == b.x.to_bits() && a.finite_support == b.finite_support;
        rep.record(if same { 0.0 } else { 1.0 }, 0.5, 0.0, || {
            format!("{name}: profile")
        });
    }
    rep
}

/// Completeness of the step maps at `k_max = 4` with the overflow effect,
/// on a fixed `(r, beta)` grid.
fn completeness_grid(cutoff: usize) -> Result<GridReport> {
    let mut rep = GridReport::new("kraus_completeness");
    for &n in &[8usize, 16, 64] {
        for &mag in &[0.0, 0.5, 1.0] {
            for ph in 0..4 {
                let beta = C64::from_polar(mag, ph as f64 * 1.3);
                let fam = step_kraus(1.0 / n as f64, beta, 4, cutoff)?;
                let c = fam.completeness();
                rep.record(c.residual, 1e-9, 0.0, || format!("N={n} beta={beta}"));
            }
        }
    }
    Ok(rep)
}

/// Run every bound grid. Deterministic: the same configuration always gives
/// the same report and hash.
pub fn cmd_validate(cfg: &ValidateConfig) -> Result<ValidationReport> {
    let ((lag, bin), (tail, conv)) = rayon::join(
        || rayon::join(laguerre_grid, binomial_grid),
        || rayon::join(|| displaced_tail_grid(cfg.cutoff), convolution_grid),
    );
    let (pk_grid, pk) = pk_bound_grid(cfg.cutoff, cfg.beta_cap_factor)?;
    let grids = vec![
        lag,
        bin,
        tail,
        coherent_grid(cfg.cutoff),
        identity_displacement_grid(cfg.cutoff),
        pk_grid,
        conv,
        completeness_grid(cfg.cutoff)?,
    ];
    let passed = grids.iter().all(GridReport::passed);
    let mut report = ValidationReport {
        config: *cfg,
        grids,
        pk,
        passed,
        hash: String::new(),
    };
    let digest = Sha256::digest(serde_json::to_vec(&report)?);
    report.hash = hex::encode(digest);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_grids_pass() {
        assert!(coherent_grid(24).passed());
        assert!(identity_displacement_grid(24).passed());
        assert!(completeness_grid(24).unwrap().passed());
    }
}
