use nalgebra::DVector;
use num_complex::Complex64;

use super::{ComplexMatrix, HermitianObservable, ONE, ZERO};
use crate::{Error, Result, Tolerances};

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose squared norm is 1 within the default tolerance.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, Tolerances::default().norm)
    }

    pub fn with_tolerance(amplitudes: DVector<Complex64>, tol_norm: f64) -> Result<Self> {
        let norm_sq = amplitudes.norm_squared();
        if !((norm_sq - 1.0).abs() <= tol_norm) {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        Ok(PureState {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        Ok(PureState {
            amplitudes: DVector::from_fn(dim, |i, _| if i == index { ONE } else { ZERO }),
        })
    }

    /// Eigenvector `index` of `obs` as a state.
    pub fn eigenstate(obs: &HermitianObservable, index: usize) -> Result<Self> {
        Ok(PureState::from_unit_vector(obs.eigenvector(index)?))
    }

    pub(crate) fn from_unit_vector(amplitudes: DVector<Complex64>) -> Self {
        PureState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        other.check_dim(self.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tensor product with `self` as the major factor.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let n = other.dim();
        PureState {
            amplitudes: DVector::from_fn(self.dim() * n, |r, _| {
                self.amplitudes[r / n] * other.amplitudes[r % n]
            }),
        }
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Positive, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let obs = HermitianObservable::with_tolerance(matrix.clone(), tol.herm)
            .map_err(|e| match e {
                Error::NotHermitian { row, col, deviation } => Error::InvalidDensityMatrix(format!(
                    "not Hermitian at ({row},{col}), deviation {deviation:e}"
                )),
                other => other,
            })?;
        let trace = matrix.trace();
        if (trace - ONE).norm() > tol.norm {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
        }
        let lowest = obs.eigenvalues().first().copied().unwrap_or(0.0);
        if lowest < -tol.psd {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(HermitianObservable::new(self.matrix.clone())?
            .eigenvalues()
            .to_vec())
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    System,
    Meter,
}

/// Traces out one factor of a system-major joint density matrix.
pub fn partial_trace(
    rho: &DensityMatrix,
    dim_system: usize,
    dim_meter: usize,
    keep: Factor,
) -> Result<DensityMatrix> {
    if rho.dim() != dim_system * dim_meter {
        return Err(Error::DimensionMismatch {
            expected: dim_system * dim_meter,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let out = match keep {
        Factor::System => ComplexMatrix::from_fn(dim_system, dim_system, |i, j| {
            (0..dim_meter)
                .map(|k| m.get(i * dim_meter + k, j * dim_meter + k))
                .sum()
        }),
        Factor::Meter => ComplexMatrix::from_fn(dim_meter, dim_meter, |k, l| {
            (0..dim_system)
                .map(|i| m.get(i * dim_meter + k, i * dim_meter + l))
                .sum()
        }),
    };
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> PureState {
        PureState::normalized(DVector::from_fn(n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        }))
        .unwrap()
    }

    #[test]
    fn rejects_unnormalized() {
        let v = DVector::from_vec(vec![ONE, ONE]);
        assert!(matches!(PureState::new(v.clone()), Err(Error::NotNormalized { .. })));
        assert!((PureState::normalized(v).unwrap().amplitudes().norm() - 1.0).abs() < 1e-15);
        assert!(PureState::normalized(DVector::from_vec(vec![ZERO, ZERO])).is_err());
    }

    #[test]
    fn product_state_trace_recovers_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_state(&mut rng, 3);
        let m = random_state(&mut rng, 2);
        let joint = s.tensor(&m).density_matrix();
        let rs = partial_trace(&joint, 3, 2, Factor::System).unwrap();
        let rm = partial_trace(&joint, 3, 2, Factor::Meter).unwrap();
        assert!(rs.matrix().approx_eq(s.density_matrix().matrix(), 1e-14));
        assert!(rm.matrix().approx_eq(m.density_matrix().matrix(), 1e-14));
    }

    #[test]
    fn bell_state_marginals_are_maximally_mixed() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_slice(&[
            Complex64::new(r, 0.0),
            ZERO,
            ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let half = ComplexMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        for keep in [Factor::System, Factor::Meter] {
            let reduced = partial_trace(&bell.density_matrix(), 2, 2, keep).unwrap();
            assert!(reduced.matrix().approx_eq(&half, 1e-15));
        }
    }

    #[test]
    fn random_joint_state_matches_index_loop_seed_7() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (ds, dm) = (3, 4);
        let psi = random_state(&mut rng, ds * dm);
        let a = psi.amplitudes();
        let reduced = partial_trace(&psi.density_matrix(), ds, dm, Factor::System).unwrap();
        for i in 0..ds {
            for j in 0..ds {
                let mut expected = ZERO;
                for k in 0..dm {
                    expected += a[i * dm + k] * a[j * dm + k].conj();
                }
                assert!((reduced.get(i, j) - expected).norm() < 1e-14);
            }
        }
        DensityMatrix::new(reduced.matrix().clone(), &Tolerances::default()).unwrap();
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = PureState::basis(4, 0).unwrap().density_matrix();
        assert!(matches!(
            partial_trace(&rho, 3, 2, Factor::System),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let tol = Tolerances::default();
        let not_unit = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(not_unit, &tol).is_err());
        let negative = ComplexMatrix::from_diagonal(&[1.5, -0.5]);
        assert!(DensityMatrix::new(negative, &tol).is_err());
        let pure = PureState::basis(2, 1).unwrap().density_matrix();
        assert!((pure.purity() - 1.0).abs() < 1e-15);
    }
}
