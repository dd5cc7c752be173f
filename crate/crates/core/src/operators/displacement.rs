//! Number-basis matrix elements of the displacement operator `D(xi)`.

use num_complex::Complex64 as C64;

use super::laguerre::laguerre_unchecked;
use super::OperatorMatrix;
use crate::fock::FockVector;
use crate::special::ln_factorial;

/// `<n|D(xi)|m>` from the Laguerre closed form.
pub fn displacement_element(n: usize, m: usize, xi: C64) -> C64 {
    let x = xi.norm_sqr();
    if x == 0.0 {
        return C64::new(if n == m { 1.0 } else { 0.0 }, 0.0);
    }
    let (lo, hi) = (n.min(m), n.max(m));
    let d = (hi - lo) as i32;
    let magnitude = (0.5 * (ln_factorial(lo as u64) - ln_factorial(hi as u64))
        + d as f64 * xi.norm().ln()
        - x / 2.0)
        .exp();
    let unit = xi / xi.norm();
    // below the diagonal the power is xi^d, above it (-xi*)^d
    let phase = if n >= m {
        unit.powi(d)
    } else {
        (-unit.conj()).powi(d)
    };
    phase * magnitude * laguerre_unchecked(lo as u32, d as f64, x)
}

pub fn displacement_matrix(xi: C64, cutoff: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(cutoff, |n, m| displacement_element(n, m, xi))
}

/// Rows `<k|D(xi)|j>` for `k < rows`, `j < cols`.
pub fn count_rows(xi: C64, rows: usize, cols: usize) -> Vec<Vec<C64>> {
    let x = xi.norm_sqr();
    let damp = (-x / 2.0).exp();
    let step = -xi.conj();
    (0..rows)
        .map(|k| {
            let mut row = Vec::with_capacity(cols);
            for j in 0..cols.min(k) {
                row.push(displacement_element(k, j, xi));
            }
            // on and above the diagonal: sqrt(k!/j!) (-xi*)^{j-k} advanced by ratio
            let mut t = C64::new(damp, 0.0);
            for j in k..cols {
                row.push(t * laguerre_unchecked(k as u32, (j - k) as f64, x));
                t = t * step / ((j + 1) as f64).sqrt();
            }
            row
        })
        .collect()
}

/// A displaced state cropped to the input cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Displaced {
    pub state: FockVector,
    /// Squared norm the displacement pushed beyond the cutoff.
    pub discarded: f64,
}

/// `D(xi) v`, evaluated on an enlarged space so the norm pushed past the
/// cutoff can be reported.
pub fn displace(v: &FockVector, xi: C64) -> Displaced {
    let cutoff = v.cutoff();
    let r = xi.norm();
    let extra = 20 + (4.0 * r * r + 8.0 * r).ceil() as usize;
    let top = v.top().unwrap_or(0);
    let full: Vec<C64> = (0..=cutoff + extra)
        .map(|n| {
            (0..=top)
                .map(|m| displacement_element(n, m, xi) * v.amp(m))
                .sum()
        })
        .collect();
    let discarded = full[cutoff + 1..].iter().map(|z| z.norm_sqr()).sum();
    Displaced {
        state: FockVector::from_fn(cutoff, |n| full[n]),
        discarded,
    }
}

/// Displaced state on an explicit, possibly larger, cutoff.
pub fn displace_into(v: &FockVector, xi: C64, cutoff: usize) -> FockVector {
    let top = v.top().unwrap_or(0);
    FockVector::from_fn(cutoff, |n| {
        (0..=top)
            .map(|m| displacement_element(n, m, xi) * v.amp(m))
            .sum()
    })
}
