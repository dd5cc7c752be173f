//! Weak beamsplitter tap into a vacuum ancilla.
//!
//! With power reflectance `r`, the component `|m>` splits into
//! `sum_k sqrt(C(m,k) r^k (1-r)^(m-k)) |m-k>|k>`; all coefficients are taken
//! positive and any phase is carried by the displacement that follows.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::special::ln_binomial;

/// `sqrt(C(m,k) r^k (1-r)^(m-k))`, valid for `r` in `[0, 1]`.
pub fn tap_coefficient(m: usize, k: usize, r: f64) -> f64 {
    if k > m {
        return 0.0;
    }
    if r == 0.0 {
        return (k == 0) as u8 as f64;
    }
    if r == 1.0 {
        return (k == m) as u8 as f64;
    }
    let (m_, k_) = (m as u64, k as u64);
    (0.5 * (ln_binomial(m_, k_) + k as f64 * r.ln() + (m - k) as f64 * (-r).ln_1p())).exp()
}

/// Tap coefficients for one reflectance, tabulated over `m, k <= M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TapTable {
    r: f64,
    dim: usize,
    coef: Vec<f64>,
}

impl TapTable {
    /// `r = 1` is allowed: it routes the whole signal to the counter.
    pub fn new(r: f64, cutoff: usize) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "reflectance {r} outside (0, 1]"
            )));
        }
        let dim = cutoff + 1;
        let mut coef = vec![0.0; dim * dim];
        for m in 0..dim {
            for k in 0..=m {
                coef[m * dim + k] = tap_coefficient(m, k, r);
            }
        }
        Ok(Self { r, dim, coef })
    }

    pub fn shared(r: f64, cutoff: usize) -> Result<Arc<Self>> {
        Self::new(r, cutoff).map(Arc::new)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    /// Coefficient for `k` of `m` photons being tapped.
    #[inline]
    pub fn coef(&self, m: usize, k: usize) -> f64 {
        self.coef[m * self.dim + k]
    }

    /// Signal-mode branch left behind when `k` photons are tapped.
    pub fn branch(&self, v: &FockVector, k: usize) -> FockVector {
        let a = v.amps();
        FockVector::from_fn(self.cutoff(), |n| {
            let m = n + k;
            if m < self.dim {
                a[m] * self.coef(m, k)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// Unnormalised branches indexed by the tapped photon count `k = 0..=k_max`.
pub fn beamsplitter_tap(state: &FockVector, r: f64, k_max: usize) -> Result<Vec<FockVector>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "reflectance {r} outside (0, 1)"
        )));
    }
    if k_max > state.cutoff() {
        return Err(Error::InvalidParameter(format!(
            "k_max {k_max} exceeds cutoff {}",
            state.cutoff()
        )));
    }
    let table = TapTable::new(r, state.cutoff())?;
    Ok((0..=k_max).map(|k| table.branch(state, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::presets;
    use crate::special::binomial;

    #[test]
    fn single_photon_quarter_reflectance() {
        let branches = beamsplitter_tap(&FockVector::basis(3, 1), 0.25, 1).unwrap();
        assert!((branches[0].amp(1).re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((branches[1].amp(0).re - 0.5).abs() < 1e-15);
        assert_eq!(branches[1].norm_sqr(), 0.25);
    }

    #[test]
    fn transparent_limit() {
        let pair = presets::cat(1.0, 24).unwrap();
        let branches = beamsplitter_tap(pair.psi(), 1e-15, 3).unwrap();
        assert!(branches[0].max_abs_diff(pair.psi()) < 1e-13);
        for b in &branches[1..] {
            assert!(b.norm() < 1e-7);
        }
    }

    #[test]
    fn branch_zero_is_attenuated_input() {
        let pair = presets::cat(1.2, 24).unwrap();
        let n = 16.0;
        let b0 = &beamsplitter_tap(pair.phi(), 1.0 / n, 0).unwrap()[0];
        for m in 0..=24 {
            let expect = pair.phi().amp(m) * (1.0 - 1.0 / n).powf(m as f64 / 2.0);
            assert!((b0.amp(m) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn branches_conserve_norm_and_match_binomial() {
        let pair = presets::cat(1.0, 24).unwrap();
        let r = 0.3;
        let branches = beamsplitter_tap(pair.psi(), r, 24).unwrap();
        let total: f64 = branches.iter().map(FockVector::norm_sqr).sum();
        assert!((total - 1.0).abs() < 1e-13);
        let c = pair.psi();
        for (k, b) in branches.iter().enumerate() {
            for m in k..=24 {
                let expect = c.amp(m)
                    * (binomial(m as u64, k as u64)
                        * r.powi(k as i32)
                        * (1.0 - r).powi((m - k) as i32))
                    .sqrt();
                assert!((b.amp(m - k) - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_reflectance() {
        let v = FockVector::basis(4, 1);
        assert!(beamsplitter_tap(&v, 0.0, 1).is_err());
        assert!(beamsplitter_tap(&v, 1.0, 1).is_err());
        assert!(beamsplitter_tap(&v, 0.5, 5).is_err());
    }
}
