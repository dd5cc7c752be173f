//! The last step routes all remaining light to the counter after a
//! displacement `gamma`, so outcome `k` projects onto `D(-gamma)|k>`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::search::CompassSearch;
use crate::error::{Error, Result};
use crate::fock::FockVector;

/// Which input the zero-click outcome is aligned with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `k = 0` decides for the first state, `k = 1` for the second.
    Direct,
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalPlan {
    /// Displacement of the counted light.
    pub gamma: C64,
    /// `gamma * sqrt(N)`.
    pub beta: C64,
    pub orientation: Orientation,
    /// First-order alignment the search started from.
    pub seed: C64,
    /// Weighted miss probability at `gamma`, relative to the total weight.
    pub miss: f64,
    pub seed_miss: f64,
}

/// Default bound on `|gamma|` for callers without a displacement cap.
pub const DEFAULT_FINAL_RADIUS: f64 = 4.0;

/// Relative weight below which the 0/1-photon content counts as absent.
const SUBSPACE_TOL: f64 = 1e-12;

/// Probability of not counting `k` photons, summed over the two inputs, for
/// `D0 = D(-gamma)|0>` aligned with `zero` and `D1` with `one`. Inputs are
/// unnormalised; their squared norms act as weights.
pub fn miss_probability(zero: &FockVector, one: &FockVector, gamma: C64) -> f64 {
    let len = zero.top().unwrap_or(0).max(one.top().unwrap_or(0)) + 1;
    let (a, b) = (zero.amps(), one.amps());
    let x = gamma.norm_sqr();
    let step = -gamma.conj();
    // t = <0|D(gamma)|m> = e^{-x/2} (-gamma*)^m / sqrt(m!), and for m >= 1
    // <1|D(gamma)|m> = t_{m-1} (m - x) / sqrt(m)
    let mut t = C64::new((-0.5 * x).exp(), 0.0);
    let mut hit0 = t * a[0];
    let mut hit1 = gamma * t * b[0];
    for m in 1..len {
        let root = (m as f64).sqrt();
        hit1 += t * ((m as f64 - x) / root) * b[m];
        t = t * step / root;
        hit0 += t * a[m];
    }
    zero.norm_sqr() + one.norm_sqr() - hit0.norm_sqr() - hit1.norm_sqr()
}

/// Final displacement for conditional states `psi_f`, `phi_f` of an
/// `n`-step run, with `|gamma|` unrestricted up to [`DEFAULT_FINAL_RADIUS`].
pub fn plan_final_displacement(
    psi_f: &FockVector,
    phi_f: &FockVector,
    n: usize,
) -> Result<FinalPlan> {
    plan_final_bounded(psi_f, phi_f, n, DEFAULT_FINAL_RADIUS)
}

/// Choose the orientation and `|gamma| <= radius` that minimise the miss
/// probability, seeded by the first-order alignment `gamma = -a1/a0` (or
/// its counterpart from the other state).
pub fn plan_final_bounded(
    psi_f: &FockVector,
    phi_f: &FockVector,
    n: usize,
    radius: f64,
) -> Result<FinalPlan> {
    if psi_f.cutoff() != phi_f.cutoff() {
        return Err(Error::CutoffMismatch {
            left: psi_f.cutoff(),
            right: phi_f.cutoff(),
        });
    }
    let total = psi_f.norm_sqr() + phi_f.norm_sqr();
    let low: f64 = [psi_f, phi_f]
        .iter()
        .map(|v| v.amp(0).norm_sqr() + v.amp(1).norm_sqr())
        .sum();
    if total == 0.0 || low <= SUBSPACE_TOL * total {
        return Err(Error::FinalSubspace);
    }
    let scale = C64::new(total.sqrt().recip(), 0.0);
    let (psi, phi) = (psi_f.scaled(scale), phi_f.scaled(scale));

    let mut best: Option<FinalPlan> = None;
    for orientation in [Orientation::Direct, Orientation::Swapped] {
        let (zero, one) = match orientation {
            Orientation::Direct => (&psi, &phi),
            Orientation::Swapped => (&phi, &psi),
        };
        let objective = |g: C64| miss_probability(zero, one, g);
        let clip = |g: C64| {
            if g.norm() > radius {
                g * (radius / g.norm())
            } else {
                g
            }
        };
        // first-order alignment of D0 (or D1) with its state
        let seed = if zero.amp(0).norm() > 1e-12 * zero.norm() {
            clip(-zero.amp(1) / zero.amp(0))
        } else if one.amp(1).norm() > 1e-12 * one.norm() {
            clip((one.amp(0) / one.amp(1)).conj())
        } else {
            C64::new(0.0, 0.0)
        };
        let seed_miss = objective(seed);
        let start = if objective(C64::new(0.0, 0.0)) < seed_miss {
            C64::new(0.0, 0.0)
        } else {
            seed
        };
        let step = 0.25 * seed.norm().max((n as f64).sqrt().recip());
        let search = CompassSearch {
            initial_step: step,
            min_step: 1e-6 * step,
            max_evals: 300,
            radius,
            target: 0.0,
        };
        let res = search.minimize(start, objective);
        let plan = FinalPlan {
            gamma: res.point,
            beta: res.point * (n as f64).sqrt(),
            orientation,
            seed,
            miss: res.value,
            seed_miss,
        };
        if best.is_none_or(|b| plan.miss < b.miss) {
            best = Some(plan);
        }
    }
    Ok(best.expect("two orientations tried"))
}
