use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{phase, ComplexMatrix, PureState, ZERO};
use crate::{Error, Result, Tolerances};

const MAX_SWEEPS: usize = 100_000;

/// Hermitian operator with its spectrum cached.
///
/// Eigenvalues are ascending; eigenvectors are the columns of a unitary
/// matrix, each with its largest component made real and positive so the
/// decomposition is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().herm)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol_herm: f64) -> Result<Self> {
        matrix.check_hermitian(tol_herm)?;
        let n = matrix.rows();
        let m = matrix.as_inner();
        let symmetric = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = symmetric
            .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
            .ok_or(Error::DecompositionFailure)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eigen.eigenvalues[i].total_cmp(&eigen.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
        let mut vectors = DMatrix::from_element(n, n, ZERO);
        for (col, &k) in order.iter().enumerate() {
            let v = fix_phase(eigen.eigenvectors.column(k).into_owned());
            vectors.set_column(col, &v);
        }
        Ok(HermitianObservable {
            matrix,
            eigenvalues,
            eigenvectors: ComplexMatrix::from_inner(vectors),
        })
    }

    /// Diagonal observable; the spectrum is known exactly.
    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let eigenvectors = ComplexMatrix::from_fn(n, n, |row, col| {
            if order[col] == row {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        HermitianObservable {
            matrix: ComplexMatrix::from_diagonal(values),
            eigenvalues: order.iter().map(|&k| values[k]).collect(),
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors, in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, index: usize) -> Result<DVector<Complex64>> {
        self.check_index(index)?;
        Ok(self.eigenvectors.column(index))
    }

    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.eigenvalues[index])
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.dim(),
            });
        }
        Ok(())
    }

    /// `max|V Λ V† - M|`
    pub fn reconstruction_error(&self) -> f64 {
        self.spectral_function(|x| Complex64::new(x, 0.0))
            .max_abs_diff(&self.matrix)
    }

    /// `f(M) = V f(Λ) V†`
    pub fn spectral_function(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = self.eigenvectors.as_inner();
        let diag = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&x| f(x)));
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| v[(i, j)] * diag[j]);
        ComplexMatrix::from_inner(scaled * v.adjoint())
    }

    /// `exp(-i θ M / ħ)`
    pub fn unitary(&self, theta: f64, hbar: f64) -> ComplexMatrix {
        self.spectral_function(|x| phase(theta * x / hbar))
    }

    /// Amplitudes `⟨k|s⟩` of a vector in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.eigenvectors.as_inner().adjoint() * v
    }

    /// `V† X V`
    pub fn conjugate_into_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = self.eigenvectors.as_inner();
        ComplexMatrix::from_inner(v.adjoint() * x.as_inner() * v)
    }

    /// Outcome weights `|⟨k|s⟩|²` of a state over the eigenbasis.
    pub fn spectral_weights(&self, s: &PureState) -> Result<Vec<f64>> {
        s.check_dim(self.dim())?;
        Ok(self
            .to_eigenbasis(s.amplitudes())
            .iter()
            .map(|c| c.norm_sqr())
            .collect())
    }
}

fn fix_phase(mut v: DVector<Complex64>) -> DVector<Complex64> {
    let max = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .position(|c| c.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let rot = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|c| *c *= rot);
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
    v
}

/// Diagonalizes a Hermitian matrix with the default tolerances.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<HermitianObservable> {
    HermitianObservable::new(m.clone())
}

/// `exp(-i θ G / ħ) |s⟩`, evaluated in the eigenbasis of `G`.
pub fn evolve_by_generator(
    s: &PureState,
    generator: &HermitianObservable,
    theta: f64,
    hbar: f64,
) -> Result<PureState> {
    s.check_dim(generator.dim())?;
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    if theta == 0.0 {
        return Ok(s.clone());
    }
    let mut coeffs = generator.to_eigenbasis(s.amplitudes());
    for (c, &lambda) in coeffs.iter_mut().zip(generator.eigenvalues()) {
        *c *= phase(theta * lambda / hbar);
    }
    Ok(PureState::from_unit_vector(
        generator.eigenvectors().apply(&coeffs),
    ))
}

/// Expectation value and variance of `obs` in `s`; the variance is clamped at zero.
pub fn mean_and_variance(obs: &HermitianObservable, s: &PureState) -> Result<(f64, f64)> {
    s.check_dim(obs.dim())?;
    let psi = s.amplitudes();
    let o_psi = obs.matrix().apply(psi);
    let mean = psi.dotc(&o_psi).re;
    let second = o_psi.norm_squared();
    Ok((mean, (second - mean * mean).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let x = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        (&x + &x.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> PureState {
        PureState::normalized(DVector::from_fn(n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        }))
        .unwrap()
    }

    #[test]
    fn pauli_z_spectrum() {
        let obs = hermitian_eigensystem(&pauli()[2]).unwrap();
        assert_eq!(obs.eigenvalues(), &[-1.0, 1.0]);
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(obs.eigenvectors().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn identity_spectrum() {
        let obs = hermitian_eigensystem(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(obs.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert!(obs.eigenvectors().unitarity_defect() < 1e-15);
        assert!(obs.reconstruction_error() < 1e-15);
    }

    #[test]
    fn random_reconstruction_seed_42() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = random_hermitian(&mut rng, 4);
        let obs = hermitian_eigensystem(&m).unwrap();
        assert!(obs.reconstruction_error() <= 1e-12);
        assert!(obs.eigenvectors().unitarity_defect() <= 1e-12);
        assert!(obs.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(obs, hermitian_eigensystem(&m).unwrap());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NotHermitian { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn diagonal_constructor_matches_solver() {
        let values = [0.3, -1.2, 2.5, 0.3];
        let fast = HermitianObservable::from_diagonal(&values);
        let slow = hermitian_eigensystem(&ComplexMatrix::from_diagonal(&values)).unwrap();
        for (a, b) in fast.eigenvalues().iter().zip(slow.eigenvalues()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(fast.reconstruction_error(), 0.0);
    }

    #[test]
    fn evolution_theta_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = HermitianObservable::new(random_hermitian(&mut rng, 3)).unwrap();
        let s = random_state(&mut rng, 3);
        assert_eq!(evolve_by_generator(&s, &g, 0.0, 1.0).unwrap(), s);
    }

    #[test]
    fn spin_half_phase_per_branch() {
        // G = diag(1/2, -1/2): the +1/2 branch picks up e^{-iπ/2}.
        let g = HermitianObservable::from_diagonal(&[0.5, -0.5]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::new(DVector::from_vec(vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)])).unwrap();
        let out = evolve_by_generator(&s, &g, std::f64::consts::PI, 1.0).unwrap();
        let a = out.amplitudes();
        assert!((a[0] - Complex64::new(0.0, -r)).norm() < 1e-15);
        assert!((a[1] - Complex64::new(0.0, r)).norm() < 1e-15);
        let rel = a[1] / a[0];
        assert!((rel.arg().abs() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn integer_spectrum_is_two_pi_periodic() {
        let g = HermitianObservable::new(
            ComplexMatrix::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, -2.0, 0.0], vec![0.0, 0.0, 3.0]])
                .unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_state(&mut rng, 3);
        let out = evolve_by_generator(&s, &g, 2.0 * std::f64::consts::PI, 1.0).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn evolution_dimension_mismatch() {
        let g = HermitianObservable::from_diagonal(&[1.0, 2.0]);
        let s = PureState::basis(3, 0).unwrap();
        assert!(matches!(
            evolve_by_generator(&s, &g, 1.0, 1.0),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn eigenstate_has_zero_variance() {
        let g = HermitianObservable::from_diagonal(&[1.0, 2.0, 4.0]);
        let (mean, var) = mean_and_variance(&g, &PureState::basis(3, 2).unwrap()).unwrap();
        assert_eq!(mean, 4.0);
        assert_eq!(var, 0.0);
    }

    #[test]
    fn spin_half_superposition_uncertainty() {
        for hbar in [1.0, 0.37, 2.0] {
            let g = HermitianObservable::from_diagonal(&[hbar / 2.0, -hbar / 2.0]);
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let s = PureState::new(DVector::from_vec(vec![Complex64::new(r, 0.0), Complex64::new(0.0, r)]))
                .unwrap();
            let (mean, var) = mean_and_variance(&g, &s).unwrap();
            assert!(mean.abs() < 1e-15);
            assert!((var.sqrt() - hbar / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn variance_matches_spectral_oracle_seed_3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obs = HermitianObservable::new(random_hermitian(&mut rng, 5)).unwrap();
        let s = random_state(&mut rng, 5);
        let p = obs.spectral_weights(&s).unwrap();
        let m1: f64 = p.iter().zip(obs.eigenvalues()).map(|(p, b)| p * b).sum();
        let m2: f64 = p.iter().zip(obs.eigenvalues()).map(|(p, b)| p * b * b).sum();
        let (mean, var) = mean_and_variance(&obs, &s).unwrap();
        assert!((mean - m1).abs() < 1e-12);
        assert!((var - (m2 - m1 * m1)).abs() < 1e-12);
    }
}
