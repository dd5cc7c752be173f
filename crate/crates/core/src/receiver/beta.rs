//! The orthogonality-restoring displacement for one tap step.
//!
//! With `A = <eta0|nu1>`, `B = <eta1|nu0>`, `G = <eta1|nu1>` the step
//! parameter is `X = 2 (B* G - A G*) sqrt(r) / (|A|^2 - |B|^2)`. The tapped
//! light is displaced by `gamma = X / (1 + sqrt(1 + |X|^2))`, which tends to
//! `X / 2` without a division by `X`; in the units of a run with `N` steps the
//! displacement amplitude is `beta = gamma sqrt(N)`.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::decomposition::{decompose, OrthoDecomposition};
use super::search::CompassSearch;
use crate::error::{Error, Result};
use crate::fock::{FockVector, StatePair};
use crate::operators::displacement::count_rows;
use crate::operators::tap::TapTable;

pub const DEFAULT_DEG_TOL: f64 = 1e-6;
/// Absolute floor added to the relative degeneracy threshold.
pub const DEG_FLOOR: f64 = 1e-14;
/// The `O(1/N)` allowance on top of the displacement cap.
pub const DEFAULT_CAP_SLACK: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Generic,
    Degenerate,
    /// Numerator and denominator both vanish; treated as `X = 0`.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    /// `|A|^2 - |B|^2`.
    pub denominator: f64,
    /// `|2 (B* G - A G*)|`.
    pub numerator: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XAnalysis {
    /// Zero unless the verdict is generic.
    pub x: C64,
    pub report: DegeneracyReport,
}

pub fn analyze_x(d: &OrthoDecomposition, deg_tol: f64) -> XAnalysis {
    let a = d.eta0.dot(&d.nu1);
    let b = d.eta1.dot(&d.nu0);
    let g = d.eta1.dot(&d.nu1);
    let num = (b.conj() * g - a * g.conj()) * 2.0;
    let den = a.norm_sqr() - b.norm_sqr();
    let small_den = den.abs() < deg_tol * (a.norm_sqr() + b.norm_sqr()) + DEG_FLOOR;
    let small_num = num.norm() <= deg_tol * 2.0 * g.norm() * (a.norm() + b.norm()) + DEG_FLOOR;
    let verdict = match (small_den, small_num) {
        (false, _) => Verdict::Generic,
        (true, false) => Verdict::Degenerate,
        (true, true) => Verdict::Indeterminate,
    };
    let x = if verdict == Verdict::Generic {
        num * d.r.sqrt() / den
    } else {
        C64::new(0.0, 0.0)
    };
    XAnalysis {
        x,
        report: DegeneracyReport {
            denominator: den,
            numerator: num.norm(),
            verdict,
        },
    }
}

/// `X` at the default degeneracy threshold.
pub fn compute_x(d: &OrthoDecomposition) -> Result<C64> {
    compute_x_with(d, DEFAULT_DEG_TOL)
}

pub fn compute_x_with(d: &OrthoDecomposition, deg_tol: f64) -> Result<C64> {
    let an = analyze_x(d, deg_tol);
    match an.report.verdict {
        Verdict::Degenerate => Err(Error::Degenerate(an.report)),
        _ => Ok(an.x),
    }
}

/// Displacement applied to the tapped light, `X / (1 + sqrt(1 + |X|^2))`.
pub fn tap_displacement(x: C64) -> C64 {
    x / (1.0 + (1.0 + x.norm_sqr()).sqrt())
}

/// Largest allowed `|beta|^2` in a run of `n` steps.
pub fn cap_limit(cap: f64, n: usize, slack: f64) -> f64 {
    cap * cap + slack / n as f64
}

/// Displacement amplitude `beta` for a run of `n` steps.
pub fn choose_beta(x: C64, n: usize, cap: f64) -> Result<C64> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite X = {x}")));
    }
    let beta = tap_displacement(x) * (n as f64).sqrt();
    let limit = cap_limit(cap, n, DEFAULT_CAP_SLACK);
    if beta.norm_sqr() > limit {
        return Err(Error::CapExceeded {
            beta_sq: beta.norm_sqr(),
            limit,
        });
    }
    Ok(beta)
}

/// Overlaps of the 0- and 1-click branches as functions of the tap
/// displacement, from Gram matrices of the tap branches.
pub struct OverlapModel {
    depth: usize,
    pp: Vec<C64>,
    qq: Vec<C64>,
    pq: Vec<C64>,
}

/// Tap branches beyond this accumulated weight are ignored by the model.
const BRANCH_FLOOR: f64 = 1e-24;

impl OverlapModel {
    pub fn new(psi: &FockVector, phi: &FockVector, tap: &TapTable) -> Self {
        let top = psi.top().unwrap_or(0).max(phi.top().unwrap_or(0));
        let mut bp = Vec::new();
        let mut bq = Vec::new();
        let total = psi.norm_sqr() + phi.norm_sqr();
        let mut seen = 0.0;
        for j in 0..=top {
            let (p, q) = (tap.branch(psi, j), tap.branch(phi, j));
            seen += p.norm_sqr() + q.norm_sqr();
            bp.push(p);
            bq.push(q);
            if total - seen <= BRANCH_FLOOR * total {
                break;
            }
        }
        let depth = bp.len();
        let gram = |x: &[FockVector], y: &[FockVector]| {
            let mut g = Vec::with_capacity(depth * depth);
            for u in x {
                for v in y {
                    g.push(u.dot(v));
                }
            }
            g
        };
        Self {
            depth,
            pp: gram(&bp, &bp),
            qq: gram(&bq, &bq),
            pq: gram(&bp, &bq),
        }
    }

    fn form(&self, g: &[C64], row: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.depth {
            let mut inner = C64::new(0.0, 0.0);
            for l in 0..self.depth {
                inner += g[j * self.depth + l] * row[l];
            }
            acc += row[j].conj() * inner;
        }
        acc
    }

    /// Normalised overlaps `|<M_k psi|M_k phi>| / (|M_k psi| |M_k phi|)`, `k = 0, 1`.
    pub fn overlaps(&self, gamma: C64) -> [f64; 2] {
        let rows = count_rows(gamma, 2, self.depth);
        let mut out = [0.0; 2];
        for (k, row) in rows.iter().enumerate() {
            let np = self.form(&self.pp, row).re;
            let nq = self.form(&self.qq, row).re;
            if np > 1e-300 && nq > 1e-300 {
                out[k] = self.form(&self.pq, row).norm() / (np * nq).sqrt();
            }
        }
        out
    }

    pub fn objective(&self, gamma: C64) -> f64 {
        let [a, b] = self.overlaps(gamma);
        a.max(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub gamma: C64,
    pub objective: f64,
    pub seed_objective: f64,
    pub improved: bool,
}

/// Relative improvement below which the seed is kept.
pub const REFINE_TOL: f64 = 1e-9;
/// Objectives at or below this are already orthogonal to rounding.
pub const REFINE_TARGET: f64 = 1e-13;

/// Locally minimise the larger branch overlap over tap displacements within
/// `radius` of the origin, starting at `gamma0`.
pub fn refine_displacement(
    psi: &FockVector,
    phi: &FockVector,
    tap: &TapTable,
    gamma0: C64,
    radius: f64,
) -> Result<Refined> {
    if !(gamma0.re.is_finite() && gamma0.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite seed {gamma0}")));
    }
    if gamma0.norm() > radius * (1.0 + 1e-12) {
        return Err(Error::CapExceeded {
            beta_sq: gamma0.norm_sqr(),
            limit: radius * radius,
        });
    }
    let model = OverlapModel::new(psi, phi, tap);
    let scale = gamma0.norm().max(tap.r().sqrt());
    let search = CompassSearch {
        initial_step: 0.25 * scale,
        min_step: 1e-9 * scale,
        max_evals: 400,
        radius,
        target: REFINE_TARGET,
    };
    let res = search.minimize(gamma0, |g| model.objective(g));
    let seed_objective = model.objective(gamma0);
    let improved = res.value < seed_objective * (1.0 - REFINE_TOL);
    Ok(if improved {
        Refined {
            gamma: res.point,
            objective: res.value,
            seed_objective,
            improved,
        }
    } else {
        Refined {
            gamma: gamma0,
            objective: seed_objective,
            seed_objective,
            improved,
        }
    })
}

/// [`refine_displacement`] in the amplitude units of an `n`-step run.
pub fn refine_beta(
    pair: &StatePair,
    n: usize,
    r: f64,
    beta0: C64,
    cap: f64,
) -> Result<(C64, Refined)> {
    let tap = Arc::new(TapTable::new(r, pair.cutoff())?);
    let root = (n as f64).sqrt();
    let radius = cap_limit(cap, n, DEFAULT_CAP_SLACK).sqrt() / root;
    let refined = refine_displacement(pair.psi(), pair.phi(), &tap, beta0 / root, radius)?;
    Ok((refined.gamma * root, refined))
}

/// Analytic displacement amplitude for the first step of an `n`-step run.
pub fn analytic_beta(pair: &StatePair, n: usize, cap: f64) -> Result<C64> {
    let d = decompose(pair.psi(), pair.phi(), 1.0 / n as f64)?;
    choose_beta(compute_x(&d)?, n, cap)
}
