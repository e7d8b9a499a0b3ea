//! Dense complex linear-algebra kernel.
//!
//! Everything downstream is expressed through three types: [`ComplexMatrix`],
//! [`HermitianObservable`] (a matrix with its cached spectrum) and the two
//! state representations [`PureState`] and [`DensityMatrix`].

mod matrix;
mod observable;
mod state;

pub use matrix::{tensor_product, ComplexMatrix};
pub use observable::{evolve_by_generator, hermitian_eigensystem, mean_and_variance, HermitianObservable};
pub use state::{partial_trace, DensityMatrix, Factor, PureState};

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp(-i x)`
#[inline]
pub(crate) fn phase(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, -s)
}
