//! Analytic bounds checked on deterministic grids.
//!
//! Each check returns a [`GridReport`] counting violations; a report with
//! zero violations passes.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::displacement::{displace_into, displacement_element};
use super::kraus::step_kraus;
use super::laguerre::assoc_laguerre;
use crate::error::{Error, Result};
use crate::fock::{certify_tail, prefactor_for, presets, FockVector, StatePair};
use crate::special::{binomial, ln_binomial, ln_factorial};

/// Relative tolerance for inequalities that hold exactly in real arithmetic.
pub const GRID_RTOL: f64 = 1e-12;
/// Extra levels used when a displaced state must not feel the cutoff.
pub const DISPLACED_PAD: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub name: String,
    pub points: usize,
    pub violations: usize,
    /// Largest observed `lhs / rhs`.
    pub max_ratio: f64,
    pub worst: String,
}

impl GridReport {
    pub(crate) fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            points: 0,
            violations: 0,
            max_ratio: 0.0,
            worst: String::new(),
        }
    }

    pub(crate) fn record(&mut self, lhs: f64, rhs: f64, tol: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.worst = at();
        }
        if lhs > rhs * (1.0 + tol) {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.points > 0
    }
}

/// `|L_n^{(a)}(x)| <= C(a+n, n) e^{x/2}` for `n <= 40`, `a <= 10`, `x <= 25`.
pub fn laguerre_grid() -> GridReport {
    let mut rep = GridReport::new("laguerre_bound");
    for n in 0..=40u32 {
        for a in 0..=10i64 {
            for xi in 0..=100 {
                let x = xi as f64 * 0.25;
                let lhs = assoc_laguerre(n, a, x).expect("grid inside domain").abs();
                let rhs = binomial((a + n as i64) as u64, n as u64) * (x / 2.0).exp();
                rep.record(lhs, rhs, GRID_RTOL, || format!("n={n} a={a} x={x}"));
            }
        }
    }
    rep
}

/// `C(n,v) y^v (1-y)^{n-v} <= exp(-2n (y - v/n)^2)` for `n <= 200`, `v < n`,
/// `y in {0.05, ..., 0.95}`.
pub fn binomial_grid() -> GridReport {
    let mut rep = GridReport::new("binomial_inequality");
    for n in 1..=200u64 {
        for v in 0..n {
            for yi in 1..=19 {
                let y = yi as f64 * 0.05;
                let ln_lhs = ln_binomial(n, v) + v as f64 * y.ln() + (n - v) as f64 * (-y).ln_1p();
                let q = v as f64 / n as f64;
                let ln_rhs = -2.0 * n as f64 * (y - q) * (y - q);
                rep.record(ln_lhs.exp(), ln_rhs.exp(), GRID_RTOL, || {
                    format!("n={n} v={v} y={y}")
                });
            }
        }
    }
    rep
}

/// Pointwise bound on `|<n|D(beta)|psi>|` for `psi` with
/// `|c_m| <= c e^{-m x/2}`: the Laguerre bound turns each matrix element into
/// `C(hi, lo) sqrt(lo!/hi!) |beta|^{hi-lo}`. The sum over `m <= n` is then
/// closed with Cauchy–Schwarz over its `n + 1` terms and a binomial
/// reweighting with free `q in (e^{-x}, 1)`; the sum over `m > n` is
/// evaluated directly.
pub fn displaced_amplitude_bound(n: usize, beta: f64, x: f64, c: f64) -> f64 {
    let b2 = beta * beta;
    // closed form for m <= n, minimised over q
    let lo = (-x).exp();
    let head = (1..40)
        .map(|i| lo + (1.0 - lo) * i as f64 / 40.0)
        .map(|q| {
            ((n + 1) as f64).sqrt()
                * ((-x).exp() / q).powf(n as f64 / 2.0)
                * c
                * (q * b2 * x.exp() / (2.0 * (1.0 - q))).exp()
        })
        .fold(f64::INFINITY, f64::min);
    // direct sum for m > n
    let mut tail = 0.0;
    for m in n + 1..n + 400 {
        let d = (m - n) as f64;
        let ln_term = -(m as f64) * x / 2.0
            + 0.5 * (ln_factorial(n as u64) - ln_factorial(m as u64))
            + if beta > 0.0 {
                d * beta.ln()
            } else {
                f64::NEG_INFINITY
            }
            + ln_binomial(m as u64, n as u64);
        let term = c * ln_term.exp();
        tail += term;
        if term < 1e-18 * tail.max(1e-300) && d > 5.0 {
            break;
        }
    }
    head + tail
}

/// Exponential-tail inputs used by the displaced-tail grid.
pub fn tail_inputs(cutoff: usize) -> Vec<(String, FockVector)> {
    let cat = presets::cat(1.0, cutoff).expect("cat pair");
    let (coh, _) = presets::coherent(C64::new(0.6, 0.3), cutoff);
    let x: f64 = 1.0;
    let pre = (1.0 - (-x).exp()).sqrt();
    let thermal = FockVector::from_fn(cutoff, |m| {
        C64::new(pre * (-(m as f64) * x / 2.0).exp(), 0.0)
    });
    vec![
        ("vacuum".into(), FockVector::basis(cutoff, 0)),
        ("cat_even".into(), cat.psi().clone()),
        ("cat_odd".into(), cat.phi().clone()),
        ("coherent".into(), coh),
        ("exponential".into(), thermal),
    ]
}

/// Displaced exponential-tail states keep an exponential tail: each is
/// certified with `x > 0`, and every amplitude sits below
/// [`displaced_amplitude_bound`]. Displacements are applied on an enlarged
/// space so the cutoff does not clip the tail.
pub fn displaced_tail_grid(cutoff: usize) -> GridReport {
    let mut rep = GridReport::new("displaced_tail");
    let big = cutoff + DISPLACED_PAD;
    for (name, v) in tail_inputs(cutoff) {
        let (input, _) = v.resized(big);
        let base = certify_tail(&input);
        let x = if base.finite_support { 4.0 } else { base.x };
        let c = prefactor_for(&input, x);
        for &mag in &[0.0, 0.3, 0.7, 1.2, 2.0] {
            for ph in 0..4 {
                let beta = C64::from_polar(mag, ph as f64 * std::f64::consts::FRAC_PI_2 + 0.3);
                let out = displace_into(&input, beta, big);
                let tail = certify_tail(&out);
                // a failed certification counts as a violation
                rep.record(
                    if tail.is_certified() { 0.0 } else { 1.0 },
                    0.5,
                    0.0,
                    || format!("{name} beta={beta}: uncertified"),
                );
                for n in 0..=cutoff {
                    let lhs = out.amp(n).norm();
                    let rhs = displaced_amplitude_bound(n, mag, x, c);
                    rep.record(lhs, rhs, 1e-9, || format!("{name} beta={beta} n={n}"));
                }
            }
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PkReport {
    pub n: usize,
    pub k: usize,
    /// Exact first-step probability of `k` clicks (worst member and phase).
    pub p_k: f64,
    /// `||a^k D(beta) psi||^2 / (N^k k!)` at the same point.
    pub leading: f64,
    pub bound: f64,
    pub x: f64,
    pub b_max: f64,
    pub passed: bool,
}

pub const PK_SLACK: f64 = 0.05;

/// `N^{-k} b^2 / (1 - e^{-x}) (e^{-x} / (1 - e^{-x}))^k`.
pub fn pk_bound_value(n: usize, k: usize, x: f64, b_max: f64) -> f64 {
    let e = (-x).exp();
    (n as f64).powi(-(k as i32)) * b_max * b_max / (1.0 - e) * (e / (1.0 - e)).powi(k as i32)
}

fn falling_moment(v: &FockVector, k: usize) -> f64 {
    v.amps()
        .iter()
        .enumerate()
        .skip(k)
        .map(|(m, a)| a.norm_sqr() * (ln_factorial(m as u64) - ln_factorial((m - k) as u64)).exp())
        .sum()
}

/// First-step click probability `P_k = ||M_k psi||^2` at `r = 1/N` and tap
/// displacement `beta / sqrt(N)`, against the exponential-tail bound built
/// from `D(beta) psi`, for both members and eight phases of `|beta| = beta_cap`.
pub fn validate_pk_bound(pair: &StatePair, n: usize, beta_cap: f64, k: usize) -> Result<PkReport> {
    if n < 1 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let cutoff = pair.cutoff();
    let root = (n as f64).sqrt();
    let mut worst: Option<PkReport> = None;
    for member in [pair.psi(), pair.phi()] {
        for ph in 0..8 {
            let beta = C64::from_polar(beta_cap, ph as f64 * std::f64::consts::FRAC_PI_4);
            let fam = step_kraus(1.0 / n as f64, beta / root, k.min(cutoff), cutoff)?;
            let p_k = fam.apply(k, member).norm_sqr();
            let (wide, _) = member.resized(cutoff + DISPLACED_PAD);
            let shifted = displace_into(&wide, beta, cutoff + DISPLACED_PAD);
            let tail = certify_tail(&shifted);
            if !tail.is_certified() {
                return Err(Error::TailCertification(format!(
                    "displaced input at beta = {beta}"
                )));
            }
            let (x, b_max, bound) = (1..=200)
                .map(|i| i as f64 * 0.05)
                .map(|x| {
                    let c = prefactor_for(&shifted, x);
                    (x, c, pk_bound_value(n, k, x, c))
                })
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .expect("non-empty grid");
            let leading = falling_moment(&shifted, k)
                / ((n as f64).powi(k as i32) * ln_factorial(k as u64).exp());
            let rep = PkReport {
                n,
                k,
                p_k,
                leading,
                bound,
                x,
                b_max,
                passed: p_k <= bound * (1.0 + PK_SLACK),
            };
            let ratio = |r: &PkReport| r.p_k / r.bound;
            if worst.as_ref().is_none_or(|w| ratio(&rep) > ratio(w)) {
                worst = Some(rep);
            }
        }
    }
    Ok(worst.expect("sixteen points evaluated"))
}

/// P_k bound over a cat pair, `N in {16, 64, 256}`, `k <= 3`.
pub fn pk_bound_grid(cutoff: usize, beta_cap_factor: f64) -> Result<(GridReport, Vec<PkReport>)> {
    let pair = presets::cat(1.0, cutoff)?;
    let cap = beta_cap_factor * pair.max_mean_amplitude();
    let mut rep = GridReport::new("pk_bound");
    let mut rows = Vec::new();
    for &n in &[16usize, 64, 256] {
        for k in 0..=3 {
            let r = validate_pk_bound(&pair, n, cap, k)?;
            rep.record(r.p_k, r.bound, PK_SLACK, || format!("N={n} k={k}"));
            rows.push(r);
        }
    }
    Ok((rep, rows))
}

/// Exponential (normalised) convolved with Poissonian photon statistics:
/// `P_tot(n) <= C_E e^{C_P (e^x - 1)} e^{-n x}` for `n <= 60`.
pub fn convolution_grid() -> GridReport {
    let mut rep = GridReport::new("convolution_bound");
    for &x in &[0.25f64, 0.5, 1.0, 2.0] {
        let c_e = 1.0 - (-x).exp();
        for &c_p in &[0.1, 0.5, 1.0, 2.0, 4.0] {
            for n in 0..=60usize {
                let p_tot: f64 = (0..=n)
                    .map(|m| {
                        let pois = (m as f64 * f64::ln(c_p) - c_p - ln_factorial(m as u64)).exp();
                        pois * c_e * (-((n - m) as f64) * x).exp()
                    })
                    .sum();
                let bound = c_e * (c_p * (x.exp() - 1.0)).exp() * (-(n as f64) * x).exp();
                rep.record(p_tot, bound, GRID_RTOL, || format!("x={x} C_P={c_p} n={n}"));
            }
        }
    }
    rep
}

/// Single entry of `D(xi)` bounded via the Laguerre bound:
/// `|<n|D|m>| <= sqrt(lo!/hi!) |xi|^{hi-lo} C(hi, lo)`.
pub fn element_bound(n: usize, m: usize, xi: C64) -> (f64, f64) {
    let (lo, hi) = (n.min(m), n.max(m));
    let lhs = displacement_element(n, m, xi).norm();
    let rhs = (0.5 * (ln_factorial(lo as u64) - ln_factorial(hi as u64))).exp()
        * xi.norm().powi((hi - lo) as i32)
        * binomial(hi as u64, lo as u64);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_and_binomial_grids_pass() {
        let l = laguerre_grid();
        assert!(l.passed(), "{l:?}");
        let b = binomial_grid();
        assert!(b.passed(), "{b:?}");
        assert_eq!(b.points, 19 * (1..=200).sum::<usize>());
    }

    #[test]
    fn element_bound_holds() {
        let xi = C64::new(0.9, -1.4);
        for n in 0..=24 {
            for m in 0..=24 {
                let (lhs, rhs) = element_bound(n, m, xi);
                assert!(lhs <= rhs * (1.0 + 1e-12), "({n},{m})");
            }
        }
    }

    #[test]
    fn displaced_vacuum_certified() {
        let big = 24 + DISPLACED_PAD;
        let out = displace_into(&FockVector::basis(big, 0), C64::new(0.7, 0.0), big);
        let t = certify_tail(&out);
        assert!(t.is_certified());
        // zero displacement leaves the tail profile unchanged
        let (input, _) = presets::cat(1.0, 24).unwrap().psi().resized(big);
        let same = displace_into(&input, C64::new(0.0, 0.0), big);
        assert_eq!(certify_tail(&same), certify_tail(&input));
    }

    #[test]
    fn displaced_tail_grid_passes() {
        let rep = displaced_tail_grid(24);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn convolution_grid_passes() {
        let rep = convolution_grid();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.points, 4 * 5 * 61);
    }

    #[test]
    fn pk_trivial_cases() {
        let pair = presets::cat(1.0, 24).unwrap();
        let r0 = validate_pk_bound(&pair, 16, 2.0, 0).unwrap();
        assert!(r0.p_k > 0.5 && r0.passed);
        let vac = presets::zero_one(24);
        let fam = step_kraus(1.0 / 16.0, C64::new(0.0, 0.0), 1, 24).unwrap();
        assert_eq!(fam.apply(1, vac.psi()).norm_sqr(), 0.0);
    }

    #[test]
    fn leading_term_uses_positive_displacement() {
        // coherent input: clicks are Poissonian with mean |alpha + beta|^2 / N
        let (alpha, beta) = (C64::new(0.8, 0.1), C64::new(-0.3, 0.5));
        let (psi, _) = presets::coherent(alpha, 24);
        let n = 1000;
        let fam = step_kraus(1.0 / n as f64, beta / (n as f64).sqrt(), 1, 24).unwrap();
        let p1 = fam.apply(1, &psi).norm_sqr();
        let mean = (alpha + beta).norm_sqr() / n as f64;
        assert!((p1 - mean * (-mean).exp()).abs() < 1e-3 * mean);
    }

    #[test]
    fn pk_scales_as_inverse_square_for_two_clicks() {
        let pair = presets::cat(1.0, 24).unwrap();
        let ns = [16usize, 64, 256];
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                (
                    (n as f64).ln(),
                    validate_pk_bound(&pair, n, 1.0, 2).unwrap().p_k.ln(),
                )
            })
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope + 2.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn pk_grid_passes() {
        let (rep, rows) = pk_bound_grid(24, 4.0).unwrap();
        assert!(rep.passed(), "{rep:?} {rows:?}");
    }
}
