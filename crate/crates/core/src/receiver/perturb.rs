//! Rotated design basis for pairs whose step parameter is degenerate.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::StatePair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationConfig {
    /// Exponent in `delta = N^{-Delta}`.
    #[serde(rename = "Delta")]
    pub delta_exp: f64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            delta_exp: 1.0 / 3.0,
        }
    }
}

impl PerturbationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_exp > 0.0 && self.delta_exp < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Delta = {} outside (0, 1)",
                self.delta_exp
            )));
        }
        Ok(())
    }

    pub fn delta(&self, n: usize) -> f64 {
        (n as f64).powf(-self.delta_exp)
    }
}

/// `(sqrt(1-d) psi - sqrt(d) phi, sqrt(1-d) phi + sqrt(d) psi)`.
pub fn perturbed_basis(pair: &StatePair, delta: f64) -> Result<StatePair> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} outside [0, 1/2)"
        )));
    }
    let a = C64::new((1.0 - delta).sqrt(), 0.0);
    let b = C64::new(delta.sqrt(), 0.0);
    let mut p0 = pair.psi().scaled(a);
    p0.add_scaled(-b, pair.phi())?;
    let mut p1 = pair.phi().scaled(a);
    p1.add_scaled(b, pair.psi())?;
    Ok(StatePair::new(p0, p1, pair.ortho_tol())?.with_discarded_norm(pair.discarded_norm()))
}
