use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::interaction::{MeasurementScenario, MeterSpec};
use crate::qcore::{ComplexMatrix, HermitianObservable, PureState};
use crate::sensitivity::ReadoutPOVM;
use crate::{Error, Result, Tolerances};

/// Half-width of the pointer eigenvalue grid, in units of `σ_B`.
pub const POINTER_WIDTH: f64 = 8.0;
pub const POINTER_MIN_DIM: usize = 16;

/// Spin-1/2 meter: `B = ħσ_z/2`, `|Φ⟩ = (|0⟩ + |1⟩)/√2` (Bloch vector +x),
/// read out projectively onto `(|0⟩ ± e^{-iα}|1⟩)/√2`.
///
/// `φ_B` rotates the Bloch vector about z by `+φ_B`; outcome 1 projects onto
/// the equatorial direction at azimuth `-α`, so
/// `P(1|φ_B) = cos²((α + φ_B)/2)` and `P(2|φ_B) = sin²((α + φ_B)/2)`.
pub fn make_qubit_meter(alpha: f64, hbar: f64) -> Result<(MeterSpec, ReadoutPOVM)> {
    make_qubit_meter_with(alpha, hbar, Tolerances::default())
}

pub(crate) fn make_qubit_meter_with(alpha: f64, hbar: f64, tol: Tolerances) -> Result<(MeterSpec, ReadoutPOVM)> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let meter = MeterSpec::with_tolerances(
        PureState::from_slice(&[r, r])?,
        HermitianObservable::from_diagonal(&[hbar / 2.0, -hbar / 2.0]),
        hbar,
        tol,
    )?;
    Ok((meter, qubit_readout(alpha, &tol)?))
}

pub(crate) fn qubit_readout(alpha: f64, tol: &Tolerances) -> Result<ReadoutPOVM> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let e = Complex64::from_polar(FRAC_1_SQRT_2, -alpha);
    ReadoutPOVM::projective(
        vec![DVector::from_vec(vec![r, e]), DVector::from_vec(vec![r, -e])],
        None,
        tol,
    )
}

/// Truncated Gaussian pointer.
///
/// `B` is diagonal on a uniform grid spanning `±POINTER_WIDTH·σ_B`; the
/// initial state has `|⟨b|Φ⟩|² ∝ exp(-B_b²/2σ_B²)` (so `ΔB → σ_B`); the
/// readout is the discrete Fourier basis conjugate to the grid.
pub fn make_pointer_meter(dim: usize, sigma_b: f64, hbar: f64) -> Result<(MeterSpec, ReadoutPOVM)> {
    make_pointer_meter_with(dim, sigma_b, hbar, Tolerances::default())
}

pub(crate) fn make_pointer_meter_with(
    dim: usize,
    sigma_b: f64,
    hbar: f64,
    tol: Tolerances,
) -> Result<(MeterSpec, ReadoutPOVM)> {
    if dim < POINTER_MIN_DIM {
        return Err(Error::DimensionTooSmall {
            dim,
            min: POINTER_MIN_DIM,
        });
    }
    if !(sigma_b > 0.0 && sigma_b.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma_b must be positive, got {sigma_b}")));
    }
    let half = POINTER_WIDTH * sigma_b;
    let step = 2.0 * half / (dim - 1) as f64;
    let grid: Vec<f64> = (0..dim).map(|j| -half + step * j as f64).collect();
    let amplitudes = DVector::from_iterator(
        dim,
        grid.iter()
            .map(|&b| Complex64::new((-b * b / (4.0 * sigma_b * sigma_b)).exp(), 0.0)),
    );
    let meter = MeterSpec::with_tolerances(
        PureState::normalized(amplitudes)?,
        HermitianObservable::from_diagonal(&grid),
        hbar,
        tol,
    )?;
    let norm = 1.0 / (dim as f64).sqrt();
    let basis = (0..dim)
        .map(|m| {
            DVector::from_fn(dim, |j, _| {
                let angle = 2.0 * PI * ((j * m) % dim) as f64 / dim as f64;
                Complex64::from_polar(norm, angle)
            })
        })
        .collect();
    Ok((meter, ReadoutPOVM::projective(basis, None, &tol)?))
}

/// Seeded random scenario.
///
/// `A` and `B` are `(X + X†)/2` with independent standard-normal real and
/// imaginary parts in `X`; `|Ψ⟩` and `|Φ⟩` are normalized complex Gaussian
/// vectors; `g ~ U[0.1, 5]`; the readout is a Gram–Schmidt-orthonormalized
/// complex Gaussian basis. `ħ = 1`.
pub fn make_random_scenario(seed: u64, dim_system: usize, dim_meter: usize) -> Result<(MeasurementScenario, ReadoutPOVM)> {
    for d in [dim_system, dim_meter] {
        if !(2..=8).contains(&d) {
            return Err(Error::InvalidParameter(format!("random scenario dimensions must lie in 2..=8, got {d}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = HermitianObservable::new(random_hermitian(&mut rng, dim_system))?;
    let psi = PureState::normalized(random_vector(&mut rng, dim_system))?;
    let b = HermitianObservable::new(random_hermitian(&mut rng, dim_meter))?;
    let phi = PureState::normalized(random_vector(&mut rng, dim_meter))?;
    let g = rng.random_range(0.1..=5.0);
    let basis = gram_schmidt((0..dim_meter).map(|_| random_vector(&mut rng, dim_meter)).collect());
    let meter = MeterSpec::new(phi, b, 1.0)?;
    let povm = ReadoutPOVM::projective(basis, None, &Tolerances::default())?;
    Ok((MeasurementScenario::new(a, psi, meter, g)?, povm))
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    DVector::from_iterator(n, (0..n).map(|_| gaussian(rng)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let entries = (0..n * n).map(|_| gaussian(rng)).collect();
    let x = ComplexMatrix::from_row_major(n, n, entries).expect("square by construction");
    (&x + &x.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// Modified Gram–Schmidt, applied twice for orthogonality at machine precision.
fn gram_schmidt(vectors: Vec<DVector<Complex64>>) -> Vec<DVector<Complex64>> {
    let mut out: Vec<DVector<Complex64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for u in &out {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
        }
        let n = v.norm();
        out.push(v.unscale(n));
    }
    out
}
