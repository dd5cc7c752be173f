//! Per-step measurement maps: tap, displace the tapped light, count it.
//!
//! For outcome `k` the surviving mode is acted on by
//! `M_k[n, m] = <k|D(gamma)|m-n> * tap(m, m-n)`, stored in factored form
//! (tap table plus counting rows) and materialised densely on request.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::displacement::count_rows;
use super::tap::TapTable;
use super::OperatorMatrix;
use crate::error::{Error, Result};
use crate::fock::FockVector;

/// Extra photon numbers beyond the cutoff used when summing the overflow
/// outcomes `k > k_max`.
pub const TAIL_PAD: usize = 40;

#[derive(Debug, Clone)]
pub struct KrausFamily {
    tap: Arc<TapTable>,
    displacement: C64,
    k_max: usize,
    /// `rows[k][j] = <k|D(displacement)|j>`.
    rows: Vec<Vec<C64>>,
}

/// Kraus family for reflectance `r` (in `(0, 1]`) and tapped-mode
/// displacement `displacement`, with explicit outcomes `0..=k_max`.
pub fn step_kraus(r: f64, displacement: C64, k_max: usize, cutoff: usize) -> Result<KrausFamily> {
    if k_max > cutoff {
        return Err(Error::InvalidParameter(format!(
            "k_max {k_max} exceeds cutoff {cutoff}"
        )));
    }
    Ok(KrausFamily::from_table(
        TapTable::shared(r, cutoff)?,
        displacement,
        k_max,
    ))
}

impl KrausFamily {
    pub fn from_table(tap: Arc<TapTable>, displacement: C64, k_max: usize) -> Self {
        let rows = count_rows(displacement, k_max + 1, tap.cutoff() + 1);
        Self {
            tap,
            displacement,
            k_max,
            rows,
        }
    }

    pub fn r(&self) -> f64 {
        self.tap.r()
    }

    pub fn displacement(&self) -> C64 {
        self.displacement
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn cutoff(&self) -> usize {
        self.tap.cutoff()
    }

    /// `M_k v` (unnormalised).
    pub fn apply(&self, k: usize, v: &FockVector) -> FockVector {
        let mut out = FockVector::zeros(self.cutoff());
        self.apply_into(k, v, out.amps_mut());
        out
    }

    pub(crate) fn apply_into(&self, k: usize, v: &FockVector, out: &mut [C64]) {
        let a = v.amps();
        let row = &self.rows[k];
        let top = v.top().unwrap_or(0);
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = if n > top {
                C64::new(0.0, 0.0)
            } else {
                (0..=top - n)
                    .map(|j| row[j] * (a[n + j] * self.tap.coef(n + j, j)))
                    .sum()
            };
        }
    }

    /// `||M_k v||^2` for each explicit outcome.
    pub fn probabilities(&self, v: &FockVector) -> Vec<f64> {
        (0..=self.k_max)
            .map(|k| self.apply(k, v).norm_sqr())
            .collect()
    }

    pub fn op(&self, k: usize) -> OperatorMatrix {
        dense_op(&self.tap, &self.rows[k])
    }

    pub fn ops(&self) -> Vec<OperatorMatrix> {
        (0..=self.k_max).map(|k| self.op(k)).collect()
    }

    /// `sum_{k <= k_max} M_k^† M_k`.
    pub fn explicit_effect(&self) -> OperatorMatrix {
        let mut acc = OperatorMatrix::zeros(self.cutoff());
        for k in 0..=self.k_max {
            acc.accumulate_gram(&self.op(k));
        }
        acc
    }

    /// Effect of the outcomes `k_max < k <= M + TAIL_PAD`.
    pub fn overflow_effect(&self) -> OperatorMatrix {
        let k_tail = self.cutoff() + TAIL_PAD;
        let rows = count_rows(self.displacement, k_tail + 1, self.cutoff() + 1);
        let mut acc = OperatorMatrix::zeros(self.cutoff());
        for row in &rows[self.k_max + 1..] {
            acc.accumulate_gram(&dense_op(&self.tap, row));
        }
        acc
    }

    pub fn completeness(&self) -> Completeness {
        let explicit = self.explicit_effect();
        let overflow = self.overflow_effect();
        let mut total = explicit.clone();
        for n in 0..=self.cutoff() {
            for m in 0..=self.cutoff() {
                total.set(n, m, total.get(n, m) + overflow.get(n, m));
            }
        }
        Completeness {
            residual: total.identity_residual(),
            explicit_deficit: explicit.identity_residual(),
            k_max: self.k_max,
            k_tail: self.cutoff() + TAIL_PAD,
        }
    }
}

fn dense_op(tap: &TapTable, row: &[C64]) -> OperatorMatrix {
    OperatorMatrix::from_fn(tap.cutoff(), |n, m| {
        if m >= n {
            row[m - n] * tap.coef(m, m - n)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// How far `sum_k M_k^† M_k` is from the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Completeness {
    /// Max entry of `|explicit + overflow - I|` over outcomes `k <= k_tail`.
    pub residual: f64,
    /// Max entry of `|explicit - I|`: the weight carried by `k > k_max`.
    pub explicit_deficit: f64,
    pub k_max: usize,
    pub k_tail: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::presets;
    use crate::operators::displacement::displacement_matrix;
    use crate::operators::tap::beamsplitter_tap;
    use crate::receiver::decomposition::orthogonal_decomposition;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_displacement_reproduces_tap_branches() {
        let pair = presets::cat(1.0, 24).unwrap();
        let fam = step_kraus(0.2, C64::new(0.0, 0.0), 4, 24).unwrap();
        let branches = beamsplitter_tap(pair.psi(), 0.2, 4).unwrap();
        for (k, b) in branches.iter().enumerate() {
            assert!(fam.apply(k, pair.psi()).max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn dense_and_factored_agree() {
        let pair = presets::cat(0.9, 24).unwrap();
        let fam = step_kraus(0.1, C64::new(0.4, -0.2), 3, 24).unwrap();
        for k in 0..=3 {
            let dense = fam.op(k).apply(pair.phi()).unwrap();
            assert!(dense.max_abs_diff(&fam.apply(k, pair.phi())) < 1e-15);
        }
    }

    /// Independent route: displace an explicit ancilla with the full
    /// displacement matrix and project onto `|k>`.
    fn two_mode_oracle(r: f64, gamma: C64, cutoff: usize, ancilla: usize) -> Vec<OperatorMatrix> {
        let d = displacement_matrix(gamma, ancilla);
        (0..=ancilla)
            .map(|k| {
                OperatorMatrix::from_fn(cutoff, |n, m| {
                    if m < n {
                        return C64::new(0.0, 0.0);
                    }
                    let j = m - n;
                    let c = (crate::special::binomial(m as u64, j as u64)
                        * r.powi(j as i32)
                        * (1.0 - r).powi((m - j) as i32))
                    .sqrt();
                    d.get(k, j) * c
                })
            })
            .collect()
    }

    #[test]
    fn completeness_matches_direct_accumulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let r = rng.random_range(0.01..0.125);
            let g = C64::from_polar(
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let fam = step_kraus(r, g, 4, 24).unwrap();
            let oracle = two_mode_oracle(r, g, 24, 24 + TAIL_PAD);
            let mut acc = OperatorMatrix::zeros(24);
            for op in &oracle {
                acc.accumulate_gram(op);
            }
            assert!(acc.identity_residual() <= 1e-9);
            let report = fam.completeness();
            assert!(report.residual <= 1e-9, "{report:?}");
            for (k, want) in oracle.iter().enumerate().take(5) {
                assert!(fam.op(k).max_abs_diff(want) < 1e-13);
            }
        }
    }

    #[test]
    fn explicit_deficit_shrinks_with_k_max() {
        let g = C64::new(0.5, 0.3);
        let d2 = step_kraus(1.0 / 32.0, g, 2, 24)
            .unwrap()
            .completeness()
            .explicit_deficit;
        let d4 = step_kraus(1.0 / 32.0, g, 4, 24)
            .unwrap()
            .completeness()
            .explicit_deficit;
        assert!(d4 < d2);
    }

    #[test]
    fn leading_terms_follow_decomposition() {
        let pair = presets::cat(1.0, 24).unwrap();
        let beta = C64::new(0.7, 0.2);
        let mut errs = Vec::new();
        for &n in &[64usize, 256] {
            let nf = n as f64;
            let g = beta / nf.sqrt();
            let fam = step_kraus(1.0 / nf, g, 1, 24).unwrap();
            let dec = orthogonal_decomposition(&pair, n).unwrap();
            let damp = (-g.norm_sqr() / 2.0).exp();
            // sqrt(N) M_1 psi ~ beta eta0 + eta1'
            let mut lead = dec.eta0.scaled(beta * damp);
            lead.add_scaled(C64::new(damp, 0.0), &dec.eta1_prime)
                .unwrap();
            let m1 = fam.apply(1, pair.psi()).scaled(C64::new(nf.sqrt(), 0.0));
            // M_0 psi ~ eta0
            let m0 = fam.apply(0, pair.psi());
            errs.push((
                m1.sub(&lead).unwrap().norm(),
                m0.sub(&dec.eta0).unwrap().norm(),
            ));
        }
        // both corrections fall at least as fast as 1/N
        assert!(errs[1].0 < errs[0].0 / 3.5, "{errs:?}");
        assert!(errs[1].0 < 4.0 / 256.0, "{errs:?}");
        assert!(errs[1].1 < errs[0].1);
    }

    #[test]
    fn rejects_k_max_beyond_cutoff() {
        assert!(step_kraus(0.1, C64::new(0.0, 0.0), 5, 4).is_err());
    }
}
