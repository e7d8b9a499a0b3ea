//! The measurement interaction `U = exp(-i g A⊗B / ħ)` and its action on a
//! product input `|Ψ⟩⊗|Φ⟩`.
//!
//! The joint space is system-major: index `i·dim_meter + k` addresses
//! `|i⟩_S ⊗ |k⟩_M`. [`apply_interaction`] evaluates the output three ways so
//! that each route can serve as an oracle for the others:
//!
//! - [`Method::Direct`] multiplies by the full unitary.
//! - [`Method::SystemExpansion`] sums `⟨a|Ψ⟩ |a⟩ ⊗ exp(-i g A_a B/ħ)|Φ⟩` over
//!   the eigenstates of `A` (the meter sees a shift `φ_B = g A_a`).
//! - [`Method::MeterExpansion`] sums `exp(-i g B_b A/ħ)|Ψ⟩ ⊗ ⟨b|Φ⟩|b⟩` over the
//!   eigenstates of `B` (the system sees a random back-action kick).

use nalgebra::DVector;
use num_complex::Complex64;

use crate::qcore::{
    evolve_by_generator, mean_and_variance, partial_trace, phase, tensor_product, ComplexMatrix,
    DensityMatrix, Factor, HermitianObservable, PureState, ONE, ZERO,
};
use crate::{Error, Result, Tolerances};

/// Meter preparation: initial pure state `|Φ⟩`, generator `B` and `ħ`.
#[derive(Debug, Clone)]
pub struct MeterSpec {
    initial_state: PureState,
    generator: HermitianObservable,
    hbar: f64,
    tolerances: Tolerances,
}

impl MeterSpec {
    pub fn new(initial_state: PureState, generator: HermitianObservable, hbar: f64) -> Result<Self> {
        Self::with_tolerances(initial_state, generator, hbar, Tolerances::default())
    }

    pub fn with_tolerances(
        initial_state: PureState,
        generator: HermitianObservable,
        hbar: f64,
        tolerances: Tolerances,
    ) -> Result<Self> {
        initial_state.check_dim(generator.dim())?;
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(MeterSpec {
            initial_state,
            generator,
            hbar,
            tolerances,
        })
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn initial_state(&self) -> &PureState {
        &self.initial_state
    }

    pub fn generator(&self) -> &HermitianObservable {
        &self.generator
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// `|⟨b|Φ⟩|²` for each eigenvalue `B_b`, in ascending eigenvalue order.
    pub fn generator_weights(&self) -> Vec<f64> {
        self.generator
            .spectral_weights(&self.initial_state)
            .expect("meter dimensions checked at construction")
    }

    /// Standard deviation `ΔB` of the generator in `|Φ⟩`.
    pub fn generator_uncertainty(&self) -> f64 {
        mean_and_variance(&self.generator, &self.initial_state)
            .expect("meter dimensions checked at construction")
            .1
            .sqrt()
    }
}

/// A system observable and state coupled to a meter with strength `g`.
#[derive(Debug, Clone)]
pub struct MeasurementScenario {
    system_observable: HermitianObservable,
    system_state: PureState,
    meter: MeterSpec,
    coupling: f64,
}

impl MeasurementScenario {
    pub fn new(
        system_observable: HermitianObservable,
        system_state: PureState,
        meter: MeterSpec,
        coupling: f64,
    ) -> Result<Self> {
        system_state.check_dim(system_observable.dim())?;
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be a non-negative real, got {coupling}"
            )));
        }
        Ok(MeasurementScenario {
            system_observable,
            system_state,
            meter,
            coupling,
        })
    }

    pub fn system_observable(&self) -> &HermitianObservable {
        &self.system_observable
    }

    pub fn system_state(&self) -> &PureState {
        &self.system_state
    }

    pub fn meter(&self) -> &MeterSpec {
        &self.meter
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn hbar(&self) -> f64 {
        self.meter.hbar
    }

    pub fn dim_system(&self) -> usize {
        self.system_observable.dim()
    }

    pub fn dim_meter(&self) -> usize {
        self.meter.dim()
    }

    /// Same scenario with a different coupling strength.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(
            self.system_observable.clone(),
            self.system_state.clone(),
            self.meter.clone(),
            coupling,
        )
    }

    /// Initial amplitudes `⟨a|Ψ⟩` in the eigenbasis of `A`.
    pub fn system_amplitudes(&self) -> DVector<Complex64> {
        self.system_observable
            .to_eigenbasis(self.system_state.amplitudes())
    }
}

/// Joint system-meter state, system-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    dim_system: usize,
    dim_meter: usize,
    state: PureState,
}

impl JointState {
    pub fn dim_system(&self) -> usize {
        self.dim_system
    }

    pub fn dim_meter(&self) -> usize {
        self.dim_meter
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        self.state.amplitudes()
    }

    pub fn as_pure_state(&self) -> &PureState {
        &self.state
    }

    pub fn max_abs_diff(&self, other: &JointState) -> f64 {
        self.state.max_abs_diff(&other.state)
    }

    pub fn reduced(&self, keep: Factor) -> DensityMatrix {
        partial_trace(
            &self.state.density_matrix(),
            self.dim_system,
            self.dim_meter,
            keep,
        )
        .expect("joint dimensions are consistent by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    SystemExpansion,
    MeterExpansion,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::SystemExpansion, Method::MeterExpansion];
}

/// `exp(-i g (A⊗B) / ħ)` from the eigendecomposition of the full product
/// operator.
pub fn build_interaction_unitary(sc: &MeasurementScenario) -> Result<ComplexMatrix> {
    let n = sc.dim_system() * sc.dim_meter();
    if sc.coupling == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let product = tensor_product(sc.system_observable.matrix(), sc.meter.generator.matrix());
    let tol = sc.meter.tolerances.herm.max(1e-12 * max_abs(&product));
    let joint = HermitianObservable::with_tolerance(product, tol)?;
    Ok(joint.unitary(sc.coupling, sc.hbar()))
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.as_inner().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn apply_interaction(sc: &MeasurementScenario, method: Method) -> Result<JointState> {
    let (ds, dm) = (sc.dim_system(), sc.dim_meter());
    let psi = sc.system_state();
    let phi = sc.meter.initial_state();
    let amplitudes = match method {
        Method::Direct => {
            let u = build_interaction_unitary(sc)?;
            u.apply(psi.tensor(phi).amplitudes())
        }
        Method::SystemExpansion => {
            let coeffs = sc.system_amplitudes();
            let mut out = DVector::from_element(ds * dm, ZERO);
            for (a, &value) in sc.system_observable.eigenvalues().iter().enumerate() {
                let eigvec = sc.system_observable.eigenvector(a)?;
                let branch = evolve_by_generator(phi, &sc.meter.generator, sc.coupling * value, sc.hbar())?;
                accumulate(&mut out, coeffs[a], &eigvec, branch.amplitudes());
            }
            out
        }
        Method::MeterExpansion => {
            let coeffs = sc.meter.generator.to_eigenbasis(phi.amplitudes());
            let mut out = DVector::from_element(ds * dm, ZERO);
            for (b, &value) in sc.meter.generator.eigenvalues().iter().enumerate() {
                let eigvec = sc.meter.generator.eigenvector(b)?;
                let kicked = evolve_by_generator(psi, &sc.system_observable, sc.coupling * value, sc.hbar())?;
                accumulate(&mut out, coeffs[b], kicked.amplitudes(), &eigvec);
            }
            out
        }
    };
    Ok(JointState {
        dim_system: ds,
        dim_meter: dm,
        state: PureState::from_unit_vector(amplitudes),
    })
}

/// `out += c · (x ⊗ y)`
fn accumulate(out: &mut DVector<Complex64>, c: Complex64, x: &DVector<Complex64>, y: &DVector<Complex64>) {
    let n = y.len();
    for (i, xi) in x.iter().enumerate() {
        let cx = c * xi;
        for (k, yk) in y.iter().enumerate() {
            out[i * n + k] += cx * yk;
        }
    }
}

/// System state after the interaction, meter traced out (computational basis).
pub fn reduced_system_output(sc: &MeasurementScenario) -> Result<DensityMatrix> {
    Ok(apply_interaction(sc, Method::SystemExpansion)?.reduced(Factor::System))
}

/// Dephasing factor `Σ_b |⟨b|Φ⟩|² exp(-i g B_b (A_a1 - A_a2)/ħ)` multiplying the
/// `(a1, a2)` coherence. Exactly 1 when the eigenvalues coincide.
pub fn dephasing_factor(sc: &MeasurementScenario, a1: usize, a2: usize) -> Result<Complex64> {
    let gap = sc.system_observable.eigenvalue(a1)? - sc.system_observable.eigenvalue(a2)?;
    if gap == 0.0 {
        return Ok(ONE);
    }
    let eps = sc.coupling * gap;
    Ok(sc
        .meter
        .generator_weights()
        .iter()
        .zip(sc.meter.generator.eigenvalues())
        .map(|(&p, &b)| phase(b * eps / sc.hbar()) * p)
        .sum())
}

/// Closed-form `⟨a1|ρ_S(out)|a2⟩`: dephasing factor times the initial coherence.
pub fn predicted_offdiagonal(sc: &MeasurementScenario, a1: usize, a2: usize) -> Result<Complex64> {
    let factor = dephasing_factor(sc, a1, a2)?;
    let c = sc.system_amplitudes();
    Ok(factor * c[a1] * c[a2].conj())
}

/// `ρ_S(out)` expressed in the eigenbasis of `A`.
pub fn reduced_output_in_eigenbasis(sc: &MeasurementScenario) -> Result<ComplexMatrix> {
    let rho = reduced_system_output(sc)?;
    Ok(sc.system_observable.conjugate_into_eigenbasis(rho.matrix()))
}

/// Conditional meter state `exp(-i g A_a B/ħ)|Φ⟩` for eigenindex `a`.
pub fn meter_branch(sc: &MeasurementScenario, a: usize) -> Result<PureState> {
    let value = sc.system_observable.eigenvalue(a)?;
    evolve_by_generator(
        sc.meter.initial_state(),
        &sc.meter.generator,
        sc.coupling * value,
        sc.hbar(),
    )
}
