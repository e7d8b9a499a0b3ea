//! Finite-dimensional simulation of von Neumann-type system–meter measurements.
//!
//! A measurement couples a system observable `A` to a meter generator `B`
//! through the unitary `exp(-i g A⊗B / ħ)`. The crate quantifies both sides of
//! that interaction:
//!
//! - [`sensitivity`]: what the meter learns. Readout distributions, the squared
//!   Hellinger resolution `R(ε)`, Fisher information `F` and the quantitative
//!   resolution `δε = 1/√F`, audited against `F ≤ 4ΔB²/ħ²`.
//! - [`backaction`]: what the system loses. The characteristic function of `B`,
//!   the decoherence curve `D(ε)` and the decoherence-free distance
//!   `C_A = ħ/(2gΔB)`, audited against `D ≥ R` and `δA ≥ C_A`.
//!
//! [`interaction`] builds the joint evolution three independent ways and
//! produces the dephased system output; [`qcore`] is the dense linear-algebra
//! kernel underneath; [`scenarios`] holds the built-in meters and the scenario
//! file format.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backaction;
pub mod error;
pub mod interaction;
pub mod qcore;
pub mod scenarios;
pub mod sensitivity;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;
