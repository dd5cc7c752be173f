//! Simulation of an adaptive linear-optics receiver that tells apart two
//! orthogonal single-mode states using weak beamsplitter taps, feedforward
//! displacements and photon counting, in a truncated Fock space.
//!
//! The crate is layered bottom-up:
//!
//! - [`fock`]: state vectors, orthogonal pairs, tail certification
//! - [`operators`]: displacement matrices, taps, per-step Kraus maps, bounds
//! - [`receiver`]: feedforward planning of each step's displacement
//! - [`engine`]: exact enumeration and Monte Carlo over detection records
//! - [`analysis`]: sweeps, power-law fits, validators and the CLI back end

// Range checks are written as `!(x >= lo)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod engine;
pub mod error;
pub mod fock;
pub mod operators;
pub mod receiver;
pub mod special;

pub use error::{Error, Result};
pub use fock::{FockVector, Hypothesis, StatePair};
