//! System-side analysis: decoherence of the `A` eigenbasis coherences caused
//! by the spread of `B` in the initial meter state.
//!
//! Everything here is a function of the meter's generator statistics through
//! the characteristic function `χ(ε) = Σ_b |⟨b|Φ⟩|² exp(-i B_b ε/ħ)`; the
//! decoherence between eigenvalues `A_a1`, `A_a2` is `D(ε) = 1 - |χ(ε)|` at
//! `ε = g (A_a1 - A_a2)`.

use num_complex::Complex64;

use crate::interaction::{reduced_output_in_eigenbasis, MeasurementScenario, MeterSpec};
use crate::qcore::{phase, ONE};
use crate::sensitivity::{resolution_curve, sensitivity_report, ReadoutPOVM, SensitivityReport};
use crate::{Error, Result};

/// Eigenvalue distribution of the meter generator, ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicFunction {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
    hbar: f64,
}

impl CharacteristicFunction {
    pub fn new(meter: &MeterSpec) -> Self {
        // Merge exactly degenerate eigenvalues; this shortens the O(n²) sum in
        // `decoherence` without changing any value.
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (&b, &p) in meter.generator().eigenvalues().iter().zip(&meter.generator_weights()) {
            if eigenvalues.last() == Some(&b) {
                *weights.last_mut().unwrap() += p;
            } else {
                eigenvalues.push(b);
                weights.push(p);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|p| *p /= total);
        CharacteristicFunction {
            eigenvalues,
            weights,
            hbar: meter.hbar(),
        }
    }

    /// `χ(ε)`
    pub fn eval(&self, eps: f64) -> Complex64 {
        if eps == 0.0 {
            return ONE;
        }
        self.weights
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&p, &b)| phase(b * eps / self.hbar) * p)
            .sum()
    }

    /// `D(ε) = 1 - |χ(ε)|`, evaluated as `(1 - |χ|²)/(1 + |χ|)` with
    /// `1 - |χ|² = 4 Σ_{b<b'} p_b p_b' sin²((B_b - B_b') ε / 2ħ)` so that small
    /// values keep full relative precision.
    pub fn decoherence(&self, eps: f64) -> f64 {
        if eps == 0.0 {
            return 0.0;
        }
        let mut loss = 0.0;
        for (i, (&pi, &bi)) in self.weights.iter().zip(&self.eigenvalues).enumerate() {
            let mut row = 0.0;
            for (&pj, &bj) in self.weights[i + 1..].iter().zip(&self.eigenvalues[i + 1..]) {
                let s = ((bi - bj) * eps / (2.0 * self.hbar)).sin();
                row += pj * s * s;
            }
            loss += pi * row;
        }
        let loss = (4.0 * loss).clamp(0.0, 1.0);
        let modulus = (1.0 - loss).sqrt();
        (loss / (1.0 + modulus)).clamp(0.0, 1.0)
    }
}

pub fn characteristic_function(meter: &MeterSpec, eps: f64) -> Complex64 {
    CharacteristicFunction::new(meter).eval(eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceCurve {
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn decoherence_curve(meter: &MeterSpec, offsets: &[f64]) -> DecoherenceCurve {
    let chi = CharacteristicFunction::new(meter);
    DecoherenceCurve {
        offsets: offsets.to_vec(),
        values: offsets.iter().map(|&e| chi.decoherence(e)).collect(),
    }
}

/// `D(a1, a2) = 1 - |⟨a1|ρ_out|a2⟩ / (⟨a1|Ψ⟩⟨Ψ|a2⟩)|` from the simulated output.
pub fn decoherence_pair(sc: &MeasurementScenario, a1: usize, a2: usize) -> Result<f64> {
    sc.system_observable().check_index(a1)?;
    sc.system_observable().check_index(a2)?;
    let c = sc.system_amplitudes();
    let initial = c[a1] * c[a2].conj();
    if initial.norm() < sc.meter().tolerances().prob {
        return Err(Error::UndefinedCoherence {
            a1,
            a2,
            magnitude: initial.norm(),
        });
    }
    let rho = reduced_output_in_eigenbasis(sc)?;
    Ok((1.0 - (rho.get(a1, a2) / initial).norm()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFreeDistance {
    /// `ħ / (2 g ΔB)`
    pub closed: f64,
    /// `1 / (2 g √(d²D/dε²|₀))` with a central-difference curvature.
    pub numeric: f64,
}

impl DecoherenceFreeDistance {
    pub fn relative_gap(&self) -> f64 {
        ((self.numeric - self.closed) / self.closed).abs()
    }
}

/// Second derivative of `D` at 0 by central differences with step
/// `1e-4·ħ/ΔB`.
pub fn decoherence_curvature(meter: &MeterSpec) -> Result<f64> {
    let delta_b = meter.generator_uncertainty();
    if delta_b <= meter.tolerances().prob {
        return Err(Error::ZeroUncertainty { delta_b });
    }
    let chi = CharacteristicFunction::new(meter);
    let h = 1e-4 * meter.hbar() / delta_b;
    Ok((chi.decoherence(h) + chi.decoherence(-h) - 2.0 * chi.decoherence(0.0)) / (h * h))
}

pub fn decoherence_free_distance(sc: &MeasurementScenario) -> Result<DecoherenceFreeDistance> {
    let meter = sc.meter();
    let curvature = decoherence_curvature(meter)?;
    let g = sc.coupling();
    Ok(DecoherenceFreeDistance {
        closed: meter.hbar() / (2.0 * g * meter.generator_uncertainty()),
        numeric: 1.0 / (2.0 * g * curvature.sqrt()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundAudit {
    Satisfied,
    Violated,
    /// The readout has no sensitivity, so there is no resolution to bound.
    Vacuous,
}

impl BoundAudit {
    pub fn passed(self) -> bool {
        self != BoundAudit::Violated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundAudit::Satisfied => "pass",
            BoundAudit::Violated => "fail",
            BoundAudit::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub sensitivity: SensitivityReport,
    /// Infinite when `ΔB = 0`.
    pub c_a_closed: f64,
    pub c_a_numeric: f64,
    pub delta_a: f64,
    /// `min_ε (D(ε) - R(ε))` over the audited offsets.
    pub min_d_minus_r: f64,
    pub argmin_eps: f64,
    /// Offsets where `D < R - tol_bound`.
    pub d_geq_r_violations: usize,
    pub d_geq_r_satisfied: bool,
    pub resolution_bound: BoundAudit,
    /// `δA - C_A`; `None` when the audit is vacuous.
    pub resolution_gap: Option<f64>,
}

impl TradeoffReport {
    pub fn resolution_bound_satisfied(&self) -> bool {
        self.resolution_bound.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.sensitivity.bound_satisfied && self.d_geq_r_satisfied && self.resolution_bound_satisfied()
    }
}

/// Audits `D(ε) ≥ R(ε)` at every offset and `δA ≥ C_A`.
pub fn tradeoff_report(
    sc: &MeasurementScenario,
    povm: &ReadoutPOVM,
    phi_b: f64,
    offsets: &[f64],
) -> Result<TradeoffReport> {
    let meter = sc.meter();
    let tol = meter.tolerances();
    let sensitivity = sensitivity_report(sc, povm, phi_b)?;
    let (c_a_closed, c_a_numeric) = match decoherence_free_distance(sc) {
        Ok(d) => (d.closed, d.numeric),
        Err(Error::ZeroUncertainty { .. }) => (f64::INFINITY, f64::INFINITY),
        Err(e) => return Err(e),
    };

    let r = resolution_curve(meter, povm, phi_b, offsets)?;
    let d = decoherence_curve(meter, offsets);
    let mut min_d_minus_r = f64::INFINITY;
    let mut argmin_eps = f64::NAN;
    let mut violations = 0;
    for ((&eps, &dv), &rv) in offsets.iter().zip(&d.values).zip(&r.values) {
        let gap = dv - rv;
        if gap < min_d_minus_r {
            min_d_minus_r = gap;
            argmin_eps = eps;
        }
        if gap < -tol.bound {
            violations += 1;
        }
    }

    let delta_a = sensitivity.delta_a;
    let (resolution_bound, resolution_gap) = if delta_a.is_infinite() || delta_a.is_nan() {
        (BoundAudit::Vacuous, None)
    } else if delta_a >= c_a_closed - tol.bound {
        (BoundAudit::Satisfied, Some(delta_a - c_a_closed))
    } else {
        (BoundAudit::Violated, Some(delta_a - c_a_closed))
    };

    Ok(TradeoffReport {
        sensitivity,
        c_a_closed,
        c_a_numeric,
        delta_a,
        min_d_minus_r,
        argmin_eps,
        d_geq_r_violations: violations,
        d_geq_r_satisfied: violations == 0,
        resolution_bound,
        resolution_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interaction::dephasing_factor;
    use crate::qcore::{HermitianObservable, PureState};
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn qubit_meter() -> MeterSpec {
        MeterSpec::new(
            PureState::from_slice(&[Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap(),
            HermitianObservable::from_diagonal(&[0.5, -0.5]),
            1.0,
        )
        .unwrap()
    }

    fn qubit_scenario(g: f64) -> MeasurementScenario {
        MeasurementScenario::new(
            HermitianObservable::from_diagonal(&[0.0, 1.0]),
            PureState::from_slice(&[Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap(),
            qubit_meter(),
            g,
        )
        .unwrap()
    }

    #[test]
    fn chi_at_zero_is_one() {
        let chi = CharacteristicFunction::new(&qubit_meter());
        assert!((chi.eval(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(chi.decoherence(0.0), 0.0);
    }

    #[test]
    fn qubit_chi_is_cosine() {
        let meter = qubit_meter();
        for eps in [0.3, 1.0, PI, 5.5, -2.0] {
            let chi = characteristic_function(&meter, eps);
            assert!((chi - Complex64::new((eps / 2.0).cos(), 0.0)).norm() < 1e-15);
            let d = decoherence_curve(&meter, &[eps]).values[0];
            assert!((d - (1.0 - (eps / 2.0).cos().abs())).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenstate_meter_never_decoheres() {
        let meter = MeterSpec::new(
            PureState::basis(3, 1).unwrap(),
            HermitianObservable::from_diagonal(&[-1.0, 0.4, 2.0]),
            1.0,
        )
        .unwrap();
        let curve = decoherence_curve(&meter, &[0.0, 0.5, 3.0, 100.0]);
        assert!(curve.values.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn stable_form_matches_modulus() {
        let meter = MeterSpec::new(
            PureState::normalized(DVector::from_vec(vec![
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.5, 0.2),
                Complex64::new(0.2, 0.7),
            ]))
            .unwrap(),
            HermitianObservable::from_diagonal(&[-1.3, 0.2, 2.1]),
            0.8,
        )
        .unwrap();
        let chi = CharacteristicFunction::new(&meter);
        for eps in [0.01, 0.4, 1.7, 6.0] {
            assert!((chi.decoherence(eps) - (1.0 - chi.eval(eps).norm())).abs() < 1e-14);
            assert!((chi.eval(-eps) - chi.eval(eps).conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn pair_matches_curve_and_full_decoherence_at_pi() {
        let sc = qubit_scenario(PI);
        let d = decoherence_pair(&sc, 1, 0).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert!(decoherence_pair(&sc, 0, 0).unwrap().abs() < 1e-12);
        let sc = qubit_scenario(1.3);
        let d = decoherence_pair(&sc, 1, 0).unwrap();
        let expected = 1.0 - dephasing_factor(&sc, 1, 0).unwrap().norm();
        assert!((d - expected).abs() < 1e-10);
    }

    #[test]
    fn pair_with_vanishing_coherence() {
        let sc = MeasurementScenario::new(
            HermitianObservable::from_diagonal(&[0.0, 1.0]),
            PureState::basis(2, 0).unwrap(),
            qubit_meter(),
            1.0,
        )
        .unwrap();
        assert!(matches!(decoherence_pair(&sc, 0, 1), Err(Error::UndefinedCoherence { .. })));
        assert!(matches!(decoherence_pair(&sc, 0, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn qubit_decoherence_free_distance() {
        let d = decoherence_free_distance(&qubit_scenario(1.0)).unwrap();
        assert!((d.closed - 1.0).abs() < 1e-12);
        assert!(d.relative_gap() < 1e-4);
        let d2 = decoherence_free_distance(&qubit_scenario(2.0)).unwrap();
        assert!((d2.closed - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_uncertainty_meter() {
        let meter = MeterSpec::new(
            PureState::basis(2, 0).unwrap(),
            HermitianObservable::from_diagonal(&[0.5, -0.5]),
            1.0,
        )
        .unwrap();
        let sc = MeasurementScenario::new(
            HermitianObservable::from_diagonal(&[0.0, 1.0]),
            PureState::basis(2, 0).unwrap(),
            meter,
            1.0,
        )
        .unwrap();
        assert!(matches!(decoherence_free_distance(&sc), Err(Error::ZeroUncertainty { .. })));
        let povm = ReadoutPOVM::trivial(2);
        let rep = tradeoff_report(&sc, &povm, 0.0, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(rep.resolution_bound, BoundAudit::Vacuous);
        assert!(rep.c_a_closed.is_infinite());
        assert!(rep.all_passed());
    }
}
