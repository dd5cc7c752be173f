//! Split the zero- and one-photon tap branches of a pair into leading
//! vectors that are exactly orthogonal plus an `O(r)` residual.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, StatePair};
use crate::special::one_minus_pow;

/// Leading and residual parts of both members at reflectance `r`.
///
/// For `psi = sum c_m |m>`:
/// `eta0[m] = c_m (1-r)^{m/2}`,
/// `eta1[m-1] = c_m sqrt(1 - (1-r)^m) / sqrt(r)`,
/// `eta1_prime[m-1] = c_m sqrt(m) (1-r)^{(m-1)/2}` (the exact one-photon
/// tap branch divided by `sqrt(r)`), and `eta_r = (eta1_prime - eta1) / r`,
/// which stays bounded as `r -> 0`. The `nu*` fields are the same for `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoDecomposition {
    pub eta0: FockVector,
    pub eta1: FockVector,
    pub eta1_prime: FockVector,
    pub eta_r: FockVector,
    pub nu0: FockVector,
    pub nu1: FockVector,
    pub nu1_prime: FockVector,
    pub nu_r: FockVector,
    pub r: f64,
}

impl OrthoDecomposition {
    /// `|<eta0|nu0> + r <eta1|nu1> - <psi|phi>|`; zero up to rounding.
    pub fn identity_residual(&self, overlap: C64) -> f64 {
        (self.leading_overlap() - overlap).norm()
    }

    /// `<eta0|nu0> + r <eta1|nu1>`, which reproduces `<psi|phi>` exactly.
    pub fn leading_overlap(&self) -> C64 {
        self.eta0.dot(&self.nu0) + self.eta1.dot(&self.nu1) * self.r
    }
}

/// Decomposition at `r = 1/n` for a pair, `n >= 2`.
pub fn orthogonal_decomposition(pair: &StatePair, n: usize) -> Result<OrthoDecomposition> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 steps, got {n}"
        )));
    }
    decompose(pair.psi(), pair.phi(), 1.0 / n as f64)
}

/// Decomposition of two arbitrary vectors at reflectance `r` in `(0, 1)`.
pub fn decompose(psi: &FockVector, phi: &FockVector, r: f64) -> Result<OrthoDecomposition> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "reflectance {r} outside (0, 1)"
        )));
    }
    if psi.cutoff() != phi.cutoff() {
        return Err(Error::CutoffMismatch {
            left: psi.cutoff(),
            right: phi.cutoff(),
        });
    }
    let parts = Parts::new(r, psi.cutoff());
    let (eta0, eta1, eta1_prime, eta_r) = parts.split(psi);
    let (nu0, nu1, nu1_prime, nu_r) = parts.split(phi);
    Ok(OrthoDecomposition {
        eta0,
        eta1,
        eta1_prime,
        eta_r,
        nu0,
        nu1,
        nu1_prime,
        nu_r,
        r,
    })
}

/// Per-photon-number factors shared by both members.
struct Parts {
    r: f64,
    zero: Vec<f64>,
    one: Vec<f64>,
    one_prime: Vec<f64>,
}

impl Parts {
    fn new(r: f64, cutoff: usize) -> Self {
        let ln_t = (-r).ln_1p();
        let zero = (0..=cutoff)
            .map(|m| (m as f64 * ln_t / 2.0).exp())
            .collect();
        let one = (0..=cutoff)
            .map(|m| (one_minus_pow(r, m as u64) / r).sqrt())
            .collect();
        let one_prime = (0..=cutoff)
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    (m as f64).sqrt() * ((m - 1) as f64 * ln_t / 2.0).exp()
                }
            })
            .collect();
        Self {
            r,
            zero,
            one,
            one_prime,
        }
    }

    fn split(&self, v: &FockVector) -> (FockVector, FockVector, FockVector, FockVector) {
        let cutoff = v.cutoff();
        let a = v.amps();
        let shifted = |f: &[f64]| {
            FockVector::from_fn(cutoff, |n| {
                if n < cutoff {
                    a[n + 1] * f[n + 1]
                } else {
                    C64::default()
                }
            })
        };
        let lead0 = FockVector::from_fn(cutoff, |m| a[m] * self.zero[m]);
        let lead1 = shifted(&self.one);
        let prime = shifted(&self.one_prime);
        let resid = FockVector::from_fn(cutoff, |n| {
            if n < cutoff {
                a[n + 1] * ((self.one_prime[n + 1] - self.one[n + 1]) / self.r)
            } else {
                C64::default()
            }
        });
        (lead0, lead1, prime, resid)
    }
}
