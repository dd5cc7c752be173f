//! Physical-layer operators on the truncated Fock space: Laguerre kernels,
//! displacements, beamsplitter taps and per-step Kraus families, plus the
//! analytic bounds they are expected to satisfy.

pub mod bounds;
pub mod displacement;
pub mod kraus;
pub mod laguerre;
pub mod tap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockVector;

pub use displacement::{displace, displacement_element, displacement_matrix, Displaced};
pub use kraus::{step_kraus, KrausFamily};
pub use laguerre::assoc_laguerre;
pub use tap::{beamsplitter_tap, TapTable};

/// Dense square operator on photon numbers `0..=M`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl OperatorMatrix {
    pub fn zeros(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(cutoff: usize) -> Self {
        Self::from_fn(cutoff, |n, m| C64::new(if n == m { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn from_fn(cutoff: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let dim = cutoff + 1;
        let mut entries = Vec::with_capacity(dim * dim);
        for n in 0..dim {
            for m in 0..dim {
                entries.push(f(n, m));
            }
        }
        Self { dim, entries }
    }

    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    /// Entry `<n|A|m>`.
    pub fn get(&self, n: usize, m: usize) -> C64 {
        self.entries[n * self.dim + m]
    }

    pub fn set(&mut self, n: usize, m: usize, value: C64) {
        self.entries[n * self.dim + m] = value;
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.cutoff() != self.cutoff() {
            return Err(Error::CutoffMismatch {
                left: self.cutoff(),
                right: v.cutoff(),
            });
        }
        let a = v.amps();
        Ok(FockVector::from_fn(self.cutoff(), |n| {
            let row = &self.entries[n * self.dim..(n + 1) * self.dim];
            row.iter().zip(a).map(|(x, y)| x * y).sum()
        }))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::CutoffMismatch {
                left: self.cutoff(),
                right: other.cutoff(),
            });
        }
        let mut out = Self::zeros(self.cutoff());
        for n in 0..self.dim {
            for l in 0..self.dim {
                let a = self.get(n, l);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for m in 0..self.dim {
                    out.entries[n * self.dim + m] += a * other.get(l, m);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cutoff(), |n, m| self.get(m, n).conj())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += A^† A`.
    pub fn accumulate_gram(&mut self, a: &Self) {
        for n in 0..self.dim {
            for m in 0..self.dim {
                let s: C64 = (0..self.dim)
                    .map(|l| a.get(l, n).conj() * a.get(l, m))
                    .sum();
                self.entries[n * self.dim + m] += s;
            }
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - I`.
    pub fn identity_residual(&self) -> f64 {
        self.max_abs_diff(&Self::identity(self.cutoff()))
    }

    /// Euclidean norm of each column.
    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|m| {
                (0..self.dim)
                    .map(|n| self.get(n, m).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}
