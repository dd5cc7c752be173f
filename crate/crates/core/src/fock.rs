//! Truncated single-mode Fock-space vectors, orthogonal state pairs and
//! exponential-tail certification.
//!
//! A [`FockVector`] stores complex amplitudes for photon numbers `0..=M`.
//! Binary operations require equal cutoffs. A [`StatePair`] is the pair of
//! orthonormal hypotheses the receiver has to tell apart; it is built once at
//! ingestion (Gram–Schmidt) and never re-orthogonalised afterwards.

use std::path::Path;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: usize = 24;
pub const DEFAULT_ORTHO_TOL: f64 = 1e-12;
pub const DEFAULT_TRUNC_BUDGET: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter("empty amplitude list".into()));
        }
        if let Some(m) = amps
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::NonFinite(m));
        }
        Ok(Self { amps })
    }

    pub fn zeros(cutoff: usize) -> Self {
        Self {
            amps: vec![C64::new(0.0, 0.0); cutoff + 1],
        }
    }

    /// Number state `|m>`.
    pub fn basis(cutoff: usize, m: usize) -> Self {
        assert!(m <= cutoff, "photon number {m} beyond cutoff {cutoff}");
        let mut v = Self::zeros(cutoff);
        v.amps[m] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_fn(cutoff: usize, f: impl FnMut(usize) -> C64) -> Self {
        Self {
            amps: (0..=cutoff).map(f).collect(),
        }
    }

    pub fn from_real(cutoff: usize, values: &[f64]) -> Self {
        Self::from_fn(cutoff, |m| {
            C64::new(values.get(m).copied().unwrap_or(0.0), 0.0)
        })
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Amplitude at `m`; zero beyond the cutoff.
    pub fn amp(&self, m: usize) -> C64 {
        self.amps.get(m).copied().unwrap_or_default()
    }

    /// Highest photon number carrying a nonzero amplitude.
    pub fn top(&self) -> Option<usize> {
        self.amps.iter().rposition(|a| a.re != 0.0 || a.im != 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn check_cutoff(&self, other: &Self) -> Result<()> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::CutoffMismatch {
                left: self.cutoff(),
                right: other.cutoff(),
            });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_cutoff(other)?;
        Ok(self.dot(other))
    }

    /// Unchecked inner product for hot loops; cutoffs must already agree.
    pub(crate) fn dot(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: C64, other: &Self) -> Result<()> {
        self.check_cutoff(other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(C64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    /// Mean photon number of the normalised state.
    pub fn mean_photon_number(&self) -> f64 {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return 0.0;
        }
        self.amps
            .iter()
            .enumerate()
            .map(|(m, a)| m as f64 * a.norm_sqr())
            .sum::<f64>()
            / n2
    }

    /// Copy into a different cutoff; returns the squared norm dropped.
    pub fn resized(&self, cutoff: usize) -> (Self, f64) {
        let kept = Self::from_fn(cutoff, |m| self.amp(m));
        let dropped = self
            .amps
            .iter()
            .skip(cutoff + 1)
            .map(|a| a.norm_sqr())
            .sum();
        (kept, dropped)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..self.amps.len().max(other.amps.len()))
            .map(|m| (self.amp(m) - other.amp(m)).norm())
            .fold(0.0, f64::max)
    }
}

/// `<a|b>` with cutoff check.
pub fn inner_product(a: &FockVector, b: &FockVector) -> Result<C64> {
    a.inner(b)
}

pub fn normalize(a: &FockVector) -> Result<FockVector> {
    a.normalize()
}

/// Which member of a pair is the true input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Psi,
    Phi,
}

impl Hypothesis {
    pub const BOTH: [Hypothesis; 2] = [Hypothesis::Psi, Hypothesis::Phi];

    pub fn index(self) -> usize {
        match self {
            Hypothesis::Psi => 0,
            Hypothesis::Phi => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Hypothesis::Psi => Hypothesis::Phi,
            Hypothesis::Phi => Hypothesis::Psi,
        }
    }
}

/// Two orthonormal states on a common cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    psi: FockVector,
    phi: FockVector,
    ortho_tol: f64,
    /// Squared norm lost to the cutoff when the pair was built.
    discarded_norm: f64,
}

impl StatePair {
    pub fn new(psi: FockVector, phi: FockVector, ortho_tol: f64) -> Result<Self> {
        psi.check_cutoff(&phi)?;
        if !(ortho_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!("ortho_tol = {ortho_tol}")));
        }
        for (name, v) in [("psi", &psi), ("phi", &phi)] {
            let dev = (v.norm() - 1.0).abs();
            if dev > ortho_tol {
                return Err(Error::PairInvariant(format!(
                    "{name} norm off by {dev:.3e}"
                )));
            }
        }
        let ov = psi.dot(&phi).norm();
        if ov > ortho_tol {
            return Err(Error::PairInvariant(format!(
                "overlap {ov:.3e} > {ortho_tol:.1e}"
            )));
        }
        Ok(Self {
            psi,
            phi,
            ortho_tol,
            discarded_norm: 0.0,
        })
    }

    pub fn with_discarded_norm(mut self, discarded: f64) -> Self {
        self.discarded_norm = discarded.max(0.0);
        self
    }

    pub fn psi(&self) -> &FockVector {
        &self.psi
    }

    pub fn phi(&self) -> &FockVector {
        &self.phi
    }

    pub fn state(&self, h: Hypothesis) -> &FockVector {
        match h {
            Hypothesis::Psi => &self.psi,
            Hypothesis::Phi => &self.phi,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.psi.cutoff()
    }

    pub fn ortho_tol(&self) -> f64 {
        self.ortho_tol
    }

    pub fn discarded_norm(&self) -> f64 {
        self.discarded_norm
    }

    pub fn overlap(&self) -> C64 {
        self.psi.dot(&self.phi)
    }

    /// The same pair with the roles of the two hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            psi: self.phi.clone(),
            phi: self.psi.clone(),
            ortho_tol: self.ortho_tol,
            discarded_norm: self.discarded_norm,
        }
    }

    /// Square root of the larger mean photon number of the two members.
    pub fn max_mean_amplitude(&self) -> f64 {
        self.psi
            .mean_photon_number()
            .max(self.phi.mean_photon_number())
            .sqrt()
    }
}

/// Gram–Schmidt: `psi` is `raw_psi` normalised, `phi` the normalised part of
/// `raw_phi` orthogonal to it.
pub fn make_orthogonal_pair(raw_psi: &FockVector, raw_phi: &FockVector) -> Result<StatePair> {
    raw_psi.check_cutoff(raw_phi)?;
    let psi = raw_psi.normalize()?;
    let scale = raw_phi.norm();
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut phi = raw_phi.clone();
    // second pass removes the rounding left by the first
    for _ in 0..2 {
        let c = psi.dot(&phi);
        phi.add_scaled(-c, &psi)?;
    }
    if phi.norm() <= 1e-10 * scale {
        return Err(Error::ParallelInputs);
    }
    let phi = phi.normalize()?;
    StatePair::new(psi, phi, DEFAULT_ORTHO_TOL)
}

/// Exponential-tail certificate: `|amps[m]| <= c_max * exp(-m x / 2)` for all `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailProfile {
    pub x: f64,
    pub c_max: f64,
    /// Fewer than three significant amplitudes, or none near the cutoff; `x`
    /// then carries the `x_max` sentinel.
    pub finite_support: bool,
}

impl TailProfile {
    /// `x = 0` means no exponential decay could be certified.
    pub fn is_certified(&self) -> bool {
        self.x > 0.0
    }

    pub fn bound(&self, m: usize) -> f64 {
        self.c_max * (-(m as f64) * self.x / 2.0).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    /// Sentinel decay rate reported for finite-support states.
    pub x_max: f64,
    /// Amplitudes below `floor * max|a|` count as numerically zero.
    pub floor: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        Self {
            x_max: 50.0,
            floor: 1e-14,
        }
    }
}

pub fn certify_tail(a: &FockVector) -> TailProfile {
    certify_tail_with(a, &TailConfig::default())
}

/// Decay rate `x` is the steepest per-photon log-ratio between consecutive
/// significant amplitudes; `c_max` is the smallest prefactor making the
/// bound hold at every `m <= M` for that `x`.
pub fn certify_tail_with(a: &FockVector, cfg: &TailConfig) -> TailProfile {
    let peak = a.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let significant: Vec<(usize, f64)> = a
        .amps
        .iter()
        .enumerate()
        .map(|(m, z)| (m, z.norm()))
        .filter(|&(_, v)| peak > 0.0 && v > cfg.floor * peak)
        .collect();

    let reaches_cutoff = significant.last().is_some_and(|&(m, _)| m == a.cutoff());
    let x = if significant.len() < 3 || !reaches_cutoff {
        None
    } else {
        Some(
            significant
                .windows(2)
                .map(|w| -2.0 * (w[1].1 / w[0].1).ln() / (w[1].0 - w[0].0) as f64)
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0),
        )
    };
    let finite_support = x.is_none();
    let x = x.unwrap_or(cfg.x_max);
    TailProfile {
        x,
        c_max: prefactor_for(a, x),
        finite_support,
    }
}

/// Smallest `c` with `|a_m| <= c e^{-m x/2}` for every `m`.
pub fn prefactor_for(a: &FockVector, x: f64) -> f64 {
    a.amps
        .iter()
        .enumerate()
        .map(|(m, z)| z.norm() * (m as f64 * x / 2.0).exp())
        .fold(0.0, f64::max)
}

/// JSON ingestion format: `{"cutoff": M, "psi": [[re, im], ...], "phi": [...]}`.
/// Missing trailing amplitudes are zero; entries beyond the cutoff are
/// dropped and counted against the truncation budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub cutoff: usize,
    pub psi: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
}

impl PairFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_pair(pair: &StatePair) -> Self {
        let enc = |v: &FockVector| v.amps().iter().map(|z| [z.re, z.im]).collect();
        Self {
            cutoff: pair.cutoff(),
            psi: enc(pair.psi()),
            phi: enc(pair.phi()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Gram–Schmidt the raw vectors into a pair; errors if more than
    /// `trunc_budget` of either raw norm lies beyond the cutoff.
    pub fn into_pair(self, trunc_budget: f64) -> Result<StatePair> {
        let decode = |raw: &[[f64; 2]]| -> Result<(FockVector, f64)> {
            let full = FockVector::new(raw.iter().map(|&[re, im]| C64::new(re, im)).collect())?;
            let total = full.norm_sqr();
            let (kept, dropped) = full.resized(self.cutoff);
            let frac = if total > 0.0 { dropped / total } else { 0.0 };
            Ok((kept, frac))
        };
        let (psi, d_psi) = decode(&self.psi)?;
        let (phi, d_phi) = decode(&self.phi)?;
        let discarded = d_psi.max(d_phi);
        if discarded > trunc_budget {
            return Err(Error::TruncationBudget {
                discarded,
                budget: trunc_budget,
            });
        }
        Ok(make_orthogonal_pair(&psi, &phi)?.with_discarded_norm(discarded))
    }
}

/// Ready-made pairs used by the examples, tests and the CLI.
pub mod presets {
    use super::*;

    /// `(|0>, |1>)`: discriminated perfectly by photon counting.
    pub fn zero_one(cutoff: usize) -> StatePair {
        StatePair::new(
            FockVector::basis(cutoff, 0),
            FockVector::basis(cutoff, 1),
            DEFAULT_ORTHO_TOL,
        )
        .expect("number states are orthonormal")
    }

    /// `((|0>+|1>)/√2, (|0>-|1>)/√2)`, the degenerate case.
    pub fn plus_minus(cutoff: usize) -> StatePair {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = FockVector::from_real(cutoff, &[s, s]);
        let phi = FockVector::from_real(cutoff, &[s, -s]);
        StatePair::new(psi, phi, DEFAULT_ORTHO_TOL).expect("plus/minus pair is orthonormal")
    }

    /// Coherent state `|alpha>` truncated at `cutoff`, with the Poisson
    /// weight lost beyond it.
    pub fn coherent(alpha: C64, cutoff: usize) -> (FockVector, f64) {
        let mut amps = Vec::with_capacity(cutoff + 1);
        let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for m in 0..=cutoff {
            amps.push(a);
            a = a * alpha / ((m + 1) as f64).sqrt();
        }
        let v = FockVector { amps };
        let lost = (1.0 - v.norm_sqr()).max(0.0);
        (v, lost)
    }

    /// Even and odd cat states of amplitude `alpha`, Gram–Schmidt
    /// orthogonalised (a no-op up to rounding, since parities differ).
    pub fn cat(alpha: f64, cutoff: usize) -> Result<StatePair> {
        let a = C64::new(alpha, 0.0);
        let (plus, _) = coherent(a, cutoff);
        let (minus, _) = coherent(-a, cutoff);
        let mut even = plus.clone();
        even.add_scaled(C64::new(1.0, 0.0), &minus)?;
        let mut odd = plus;
        odd.add_scaled(C64::new(-1.0, 0.0), &minus)?;
        // exact norms of the untruncated cats
        let e2 = (-2.0 * alpha * alpha).exp();
        let lost_even = (1.0 - even.norm_sqr() / (2.0 * (1.0 + e2))).max(0.0);
        let lost_odd = (1.0 - odd.norm_sqr() / (2.0 * (1.0 - e2))).max(0.0);
        Ok(make_orthogonal_pair(&even, &odd)?.with_discarded_norm(lost_even.max(lost_odd)))
    }

    /// Random orthonormal pair with amplitudes damped as `exp(-m decay / 2)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, cutoff: usize, decay: f64) -> StatePair {
        loop {
            let mut draw = || {
                FockVector::from_fn(cutoff, |m| {
                    let w = (-(m as f64) * decay / 2.0).exp();
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * w
                })
            };
            let (a, b) = (draw(), draw());
            if let Ok(pair) = make_orthogonal_pair(&a, &b) {
                return pair;
            }
        }
    }

    /// Resolve a named preset: `zero-one`, `plus-minus`, `cat` or `cat:<alpha>`.
    pub fn by_name(name: &str, cutoff: usize) -> Result<StatePair> {
        match name {
            "zero-one" => Ok(zero_one(cutoff)),
            "plus-minus" => Ok(plus_minus(cutoff)),
            "cat" => cat(1.0, cutoff),
            other => match other.strip_prefix("cat:").map(str::parse::<f64>) {
                Some(Ok(alpha)) if alpha > 0.0 => cat(alpha, cutoff),
                _ => Err(Error::InvalidParameter(format!(
                    "unknown pair preset `{name}`"
                ))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_states_are_orthonormal() {
        let m2 = FockVector::basis(6, 2);
        assert_eq!(inner_product(&m2, &m2).unwrap(), c(1.0, 0.0));
        let (a, b) = (FockVector::basis(6, 1), FockVector::basis(6, 3));
        assert_eq!(inner_product(&a, &b).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_product_rejects_mismatched_cutoffs() {
        let err = inner_product(&FockVector::zeros(3), &FockVector::zeros(4)).unwrap_err();
        assert!(matches!(err, Error::CutoffMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn normalize_examples() {
        let v = FockVector::from_real(3, &[2.0]);
        assert_eq!(normalize(&v).unwrap(), FockVector::basis(3, 0));
        let v = normalize(&FockVector::from_real(1, &[1.0, 1.0])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.amp(0).re - s).abs() < 1e-15 && (v.amp(1).re - s).abs() < 1e-15);
        assert!(matches!(
            normalize(&FockVector::zeros(3)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn tail_of_vacuum_is_finite_support() {
        let t = certify_tail(&FockVector::basis(24, 0));
        assert!(t.finite_support);
        assert_eq!(t.x, TailConfig::default().x_max);
        assert_eq!(t.c_max, 1.0);
    }

    #[test]
    fn tail_reads_back_exponential_rate() {
        let pre = (1.0 - (-1.0f64).exp()).sqrt();
        let v = FockVector::from_fn(24, |m| c(pre * (-(m as f64) / 2.0).exp(), 0.0));
        let t = certify_tail(&v);
        assert!(!t.finite_support);
        assert!((t.x - 1.0).abs() < 1e-6, "x = {}", t.x);
        assert!((t.c_max - pre).abs() < 1e-9);
    }

    #[test]
    fn tail_of_coherent_state_matches_log_ratio_scan() {
        let (v, _) = presets::coherent(c(1.0, 0.0), 24);
        // oracle: scan all consecutive log-ratios directly
        let oracle = (0..24)
            .map(|m| -2.0 * (v.amp(m + 1).norm() / v.amp(m).norm()).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        let t = certify_tail(&v);
        assert!((t.x - oracle).abs() < 1e-12);
        for m in 0..=24 {
            assert!(v.amp(m).norm() <= t.bound(m) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn gram_schmidt_examples() {
        let pair =
            make_orthogonal_pair(&FockVector::basis(4, 0), &FockVector::basis(4, 1)).unwrap();
        assert_eq!(pair.psi(), &FockVector::basis(4, 0));
        assert_eq!(pair.phi(), &FockVector::basis(4, 1));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pair =
            make_orthogonal_pair(&FockVector::basis(4, 0), &FockVector::from_real(4, &[s, s]))
                .unwrap();
        assert!(pair.phi().max_abs_diff(&FockVector::basis(4, 1)) < 1e-15);

        let err = make_orthogonal_pair(
            &FockVector::basis(4, 2),
            &FockVector::from_real(4, &[0.0, 0.0, 3.0]),
        );
        assert!(matches!(err, Err(Error::ParallelInputs)));
    }

    #[test]
    fn random_pairs_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let pair = presets::random(&mut rng, 24, 0.5);
            assert!(pair.overlap().norm() <= 1e-12);
        }
    }

    #[test]
    fn pair_file_ingestion() {
        let text = r#"{"cutoff": 3, "psi": [[1, 0]], "phi": [[0.6, 0], [0.8, 0]]}"#;
        let pair = PairFile::from_json(text).unwrap().into_pair(1e-10).unwrap();
        assert_eq!(pair.cutoff(), 3);
        assert!(pair.phi().max_abs_diff(&FockVector::basis(3, 1)) < 1e-15);

        let text = r#"{"cutoff": 1, "psi": [[1, 0]], "phi": [[0, 0], [1, 0], [0.1, 0]]}"#;
        let err = PairFile::from_json(text)
            .unwrap()
            .into_pair(1e-10)
            .unwrap_err();
        assert!(matches!(err, Error::TruncationBudget { .. }));
    }

    #[test]
    fn cat_pair_has_tiny_truncation_loss() {
        let pair = presets::cat(1.0, 24).unwrap();
        assert!(pair.discarded_norm() < 1e-20);
        assert!(pair.overlap().norm() < 1e-15);
    }

    fn arb_vector(cutoff: usize) -> impl Strategy<Value = FockVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), cutoff + 1).prop_map(|v| {
            FockVector::new(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn inner_product_is_hermitian(a in arb_vector(12), b in arb_vector(12)) {
            let ab = inner_product(&a, &b).unwrap();
            let ba = inner_product(&b, &a).unwrap();
            prop_assert!((ab - ba.conj()).norm() < 1e-14);
            // independent summation oracle
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..=12 {
                acc += a.amp(m).conj() * b.amp(m);
            }
            prop_assert!((ab - acc).norm() < 1e-14);
            prop_assert!(inner_product(&a, &a).unwrap().im == 0.0);
        }

        #[test]
        fn normalize_gives_unit_norm(a in arb_vector(12)) {
            prop_assume!(a.norm() > 1e-6);
            let n = normalize(&a).unwrap();
            prop_assert!((inner_product(&n, &n).unwrap().re - 1.0).abs() < 1e-14);
            // positive real multiple of the input
            let ratio = inner_product(&a, &n).unwrap();
            prop_assert!(ratio.re > 0.0 && ratio.im.abs() < 1e-12);
        }

        #[test]
        fn certified_tail_bounds_every_amplitude(a in arb_vector(16)) {
            let t = certify_tail(&a);
            for m in 0..=16 {
                prop_assert!(a.amp(m).norm() <= t.bound(m) * (1.0 + 1e-12));
            }
        }
    }
}
