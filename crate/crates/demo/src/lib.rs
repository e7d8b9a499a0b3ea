//! WebAssembly bindings for the static page in `www/`.
//!
//! Each entry point returns a [`Curves`] object holding an ε grid, the
//! resolution R(ε), the decoherence D(ε) and the headline scalars.

use meterbench_core::backaction::{decoherence_curve, tradeoff_report};
use meterbench_core::interaction::{MeasurementScenario, MeterSpec};
use meterbench_core::qcore::{HermitianObservable, PureState};
use meterbench_core::scenarios::{make_pointer_meter, make_qubit_meter, make_random_scenario};
use meterbench_core::sensitivity::{resolution_curve, ReadoutPOVM};
use meterbench_core::{Complex64, Result};
use wasm_bindgen::prelude::*;

const MAX_STEPS: usize = 4096;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curves {
    eps: Vec<f64>,
    resolution: Vec<f64>,
    decoherence: Vec<f64>,
    fisher: f64,
    qfi_bound: f64,
    delta_epsilon: f64,
    c_a: f64,
    delta_a: f64,
    bounds_hold: bool,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn eps(&self) -> Vec<f64> {
        self.eps.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn resolution(&self) -> Vec<f64> {
        self.resolution.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn decoherence(&self) -> Vec<f64> {
        self.decoherence.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn fisher(&self) -> f64 {
        self.fisher
    }

    #[wasm_bindgen(getter, js_name = qfiBound)]
    pub fn qfi_bound(&self) -> f64 {
        self.qfi_bound
    }

    #[wasm_bindgen(getter, js_name = deltaEpsilon)]
    pub fn delta_epsilon(&self) -> f64 {
        self.delta_epsilon
    }

    #[wasm_bindgen(getter, js_name = decoherenceFreeDistance)]
    pub fn c_a(&self) -> f64 {
        self.c_a
    }

    #[wasm_bindgen(getter, js_name = deltaA)]
    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }

    /// True when F ≤ 4ΔB²/ħ², D ≥ R on the grid and δA ≥ C_A all hold.
    #[wasm_bindgen(getter, js_name = boundsHold)]
    pub fn bounds_hold(&self) -> bool {
        self.bounds_hold
    }
}

fn grid(eps_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.clamp(2, MAX_STEPS);
    (0..steps).map(|k| eps_max * k as f64 / (steps - 1) as f64).collect()
}

/// Couples the meter to a two-level system with eigenvalue gap 1 in an equal
/// superposition, so that C_A is the meter's own decoherence-free distance.
fn unit_gap_scenario(meter: MeterSpec, coupling: f64) -> Result<MeasurementScenario> {
    let psi = PureState::from_slice(&[Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2])?;
    MeasurementScenario::new(HermitianObservable::from_diagonal(&[0.0, 1.0]), psi, meter, coupling)
}

fn curves(sc: &MeasurementScenario, povm: &ReadoutPOVM, phi_b: f64, eps: Vec<f64>) -> Result<Curves> {
    let meter = sc.meter();
    let resolution = resolution_curve(meter, povm, phi_b, &eps)?.values;
    let decoherence = decoherence_curve(meter, &eps).values;
    let t = tradeoff_report(sc, povm, phi_b, &eps)?;
    Ok(Curves {
        eps,
        resolution,
        decoherence,
        fisher: t.sensitivity.fisher,
        qfi_bound: t.sensitivity.qfi_bound,
        delta_epsilon: t.sensitivity.delta_epsilon,
        c_a: t.c_a_closed,
        delta_a: t.delta_a,
        bounds_hold: t.all_passed(),
    })
}

pub fn qubit(alpha: f64, phi_b: f64, eps_max: f64, steps: usize) -> Result<Curves> {
    let (meter, povm) = make_qubit_meter(alpha, 1.0)?;
    curves(&unit_gap_scenario(meter, 1.0)?, &povm, phi_b, grid(eps_max, steps))
}

pub fn pointer(dim: usize, sigma_b: f64, eps_max: f64, steps: usize) -> Result<Curves> {
    let (meter, povm) = make_pointer_meter(dim, sigma_b, 1.0)?;
    curves(&unit_gap_scenario(meter, 1.0)?, &povm, 0.0, grid(eps_max, steps))
}

pub fn random(seed: u64, dim_system: usize, dim_meter: usize, eps_max: f64, steps: usize) -> Result<Curves> {
    let (sc, povm) = make_random_scenario(seed, dim_system, dim_meter)?;
    curves(&sc, &povm, 0.0, grid(eps_max, steps))
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Qubit meter read out at angle `alpha`, working point `phi_b`, ħ = 1.
#[wasm_bindgen(js_name = qubitCurves)]
pub fn qubit_curves(alpha: f64, phi_b: f64, eps_max: f64, steps: usize) -> std::result::Result<Curves, JsError> {
    js(qubit(alpha, phi_b, eps_max, steps))
}

/// Truncated Gaussian pointer meter with Fourier readout, ħ = 1.
#[wasm_bindgen(js_name = pointerCurves)]
pub fn pointer_curves(dim: usize, sigma_b: f64, eps_max: f64, steps: usize) -> std::result::Result<Curves, JsError> {
    js(pointer(dim, sigma_b, eps_max, steps))
}

/// Seeded random scenario audited at working point 0.
#[wasm_bindgen(js_name = randomAudit)]
pub fn random_audit(
    seed: u64,
    dim_system: usize,
    dim_meter: usize,
    eps_max: f64,
    steps: usize,
) -> std::result::Result<Curves, JsError> {
    js(random(seed, dim_system, dim_meter, eps_max, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_curves_coincide() {
        let c = qubit(0.4, -0.4, 6.0, 61).unwrap();
        assert_eq!(c.eps.len(), 61);
        for (r, d) in c.resolution.iter().zip(&c.decoherence) {
            assert!((r - d).abs() < 1e-12);
        }
        assert!((c.delta_epsilon - 1.0).abs() < 1e-12);
        assert!((c.c_a - 1.0).abs() < 1e-12);
        assert!(c.bounds_hold);
    }

    #[test]
    fn pointer_and_random() {
        let p = pointer(64, 2.0, 3.0, 31).unwrap();
        assert!((p.c_a - 0.25).abs() < 1e-6);
        let r = random(7, 3, 4, 10.0, 101).unwrap();
        assert!(r.bounds_hold && r.fisher <= r.qfi_bound + 1e-9);
    }

    #[test]
    fn invalid_input_is_an_error() {
        assert!(pointer(4, 1.0, 3.0, 10).is_err());
        assert!(random(1, 1, 4, 1.0, 10).is_err());
        assert_eq!(grid(1.0, 0).len(), 2);
    }
}
