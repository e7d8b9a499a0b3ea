//! Meter-side analysis: what a readout of `|φ(φ_B)⟩ = exp(-i φ_B B/ħ)|Φ⟩`
//! reveals about the shift `φ_B`.
//!
//! The resolution between `φ_B` and `φ_B + ε` is the squared Hellinger
//! distance of the two outcome distributions. Its curvature at `ε = 0` is
//! `F/4` with `F` the Fisher information, which gives the quantitative
//! resolution `δε = 1/(2√(F/4)) = 1/√F` and, through `F ≤ 4ΔB²/ħ²`, the
//! sensitivity bound `1/δε ≤ 2ΔB/ħ`.

mod povm;

pub use povm::ReadoutPOVM;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::interaction::{MeasurementScenario, MeterSpec};
use crate::qcore::{evolve_by_generator, PureState};
use crate::{Error, Result, Tolerances};

/// Readout level at which the quadratic estimate of `R` meets `δε`.
pub const RESOLUTION_LEVEL: f64 = 0.125;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub parameter: f64,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionCurve {
    pub base_parameter: f64,
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub fisher: f64,
    /// `d²R/dε²` at `ε = 0`, from the Fisher identity.
    pub second_derivative: f64,
    /// Infinite when the readout has no sensitivity.
    pub delta_epsilon: f64,
    pub delta_b: f64,
    pub qfi_bound: f64,
    /// `1/δε`
    pub sensitivity: f64,
    pub bound_satisfied: bool,
    /// `qfi_bound - fisher`; zero at saturation.
    pub bound_gap: f64,
    /// `δε / g`
    pub delta_a: f64,
    /// Exact `R(δε)`, to compare with the quadratic estimate of 1/8.
    pub resolution_at_delta_epsilon: Option<f64>,
    /// Smallest `ε > 0` with `R(ε) = 1/8`, if the curve reaches that level.
    pub crossing_one_eighth: Option<f64>,
}

pub fn meter_output_state(meter: &MeterSpec, phi_b: f64) -> Result<PureState> {
    evolve_by_generator(meter.initial_state(), meter.generator(), phi_b, meter.hbar())
}

fn check_dims(meter: &MeterSpec, povm: &ReadoutPOVM) -> Result<()> {
    if povm.dim() != meter.dim() {
        return Err(Error::DimensionMismatch {
            expected: meter.dim(),
            found: povm.dim(),
        });
    }
    Ok(())
}

fn probabilities(povm: &ReadoutPOVM, state: &DVector<Complex64>) -> Vec<f64> {
    povm.factors()
        .iter()
        .map(|ws| ws.iter().map(|w| w.dotc(state).norm_sqr()).sum::<f64>().clamp(0.0, 1.0))
        .collect()
}

/// `P(m|φ_B) = ⟨φ(φ_B)|E(m)|φ(φ_B)⟩`
pub fn outcome_distribution(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64) -> Result<OutcomeDistribution> {
    check_dims(meter, povm)?;
    let state = meter_output_state(meter, phi_b)?;
    Ok(OutcomeDistribution {
        parameter: phi_b,
        probabilities: probabilities(povm, state.amplitudes()),
    })
}

/// `½ Σ_m (√p_m - √q_m)²`
pub fn squared_hellinger(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    (0.5 * s).clamp(0.0, 1.0)
}

/// Resolution `R(φ_B, φ_B + ε)`.
pub fn hellinger_resolution(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64, eps: f64) -> Result<f64> {
    if eps == 0.0 {
        check_dims(meter, povm)?;
        return Ok(0.0);
    }
    let p = outcome_distribution(meter, povm, phi_b)?;
    let q = outcome_distribution(meter, povm, phi_b + eps)?;
    Ok(squared_hellinger(&p.probabilities, &q.probabilities))
}

pub fn resolution_curve(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64, offsets: &[f64]) -> Result<ResolutionCurve> {
    let base = outcome_distribution(meter, povm, phi_b)?;
    let values = offsets
        .iter()
        .map(|&eps| {
            if eps == 0.0 {
                return Ok(0.0);
            }
            let q = outcome_distribution(meter, povm, phi_b + eps)?;
            Ok(squared_hellinger(&base.probabilities, &q.probabilities))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResolutionCurve {
        base_parameter: phi_b,
        offsets: offsets.to_vec(),
        values,
    })
}

/// Per-outcome local data at one parameter value.
struct OutcomeSlope {
    probability: f64,
    /// `dP/dφ_B`
    derivative: f64,
    /// `⟨Bφ|E|Bφ⟩/ħ²`, the limit of `(dP)²/(4P)` at a zero of `P`.
    curvature: f64,
}

fn outcome_slopes(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64) -> Result<Vec<OutcomeSlope>> {
    check_dims(meter, povm)?;
    let state = meter_output_state(meter, phi_b)?;
    let phi = state.amplitudes();
    let b_phi = meter.generator().matrix().apply(phi);
    let hbar = meter.hbar();
    Ok(povm
        .factors()
        .iter()
        .map(|ws| {
            let mut slope = OutcomeSlope {
                probability: 0.0,
                derivative: 0.0,
                curvature: 0.0,
            };
            for w in ws {
                let x = w.dotc(phi);
                let y = w.dotc(&b_phi);
                slope.probability += x.norm_sqr();
                slope.derivative += 2.0 * (x.conj() * y).im / hbar;
                slope.curvature += y.norm_sqr() / (hbar * hbar);
            }
            slope.probability = slope.probability.clamp(0.0, 1.0);
            slope
        })
        .collect())
}

/// `dP(m|φ_B)/dφ_B = (2/ħ) Im⟨φ|E(m) B|φ⟩`
pub fn probability_derivative(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64, m: usize) -> Result<f64> {
    if m >= povm.len() {
        return Err(Error::IndexOutOfRange {
            index: m,
            len: povm.len(),
        });
    }
    Ok(outcome_slopes(meter, povm, phi_b)?[m].derivative)
}

fn fisher_term(m: usize, slope: &OutcomeSlope, tol_prob: f64) -> Result<f64> {
    let OutcomeSlope {
        probability: p,
        derivative: dp,
        curvature,
    } = *slope;
    if p >= tol_prob {
        return Ok(dp * dp / p);
    }
    // Near a zero of P, (dP)² ≤ 4P·curvature; anything larger is not a smooth
    // probability and the term would diverge.
    if dp * dp >= tol_prob * (1.0 + 4.0 * curvature) {
        return Err(Error::SingularOutcome {
            outcome: m,
            probability: p,
            derivative: dp,
        });
    }
    Ok(4.0 * curvature)
}

/// `F = Σ_m (dP/dφ_B)² / P`. Outcomes at a zero of `P` contribute their
/// continuous limit `4⟨Bφ|E|Bφ⟩/ħ²`.
pub fn fisher_information(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64) -> Result<f64> {
    let tol = meter.tolerances().prob;
    let mut f = 0.0;
    for (m, slope) in outcome_slopes(meter, povm, phi_b)?.iter().enumerate() {
        f += fisher_term(m, slope, tol)?;
    }
    Ok(f.max(0.0))
}

/// `d²R/dε²` at `ε = 0`, equal to `F/4`.
pub fn resolution_second_derivative(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64) -> Result<f64> {
    Ok(fisher_information(meter, povm, phi_b)? / 4.0)
}

fn delta_epsilon_from_fisher(fisher: f64, tol: &Tolerances) -> Result<f64> {
    if fisher <= tol.prob {
        return Err(Error::NoSensitivity { fisher });
    }
    Ok(1.0 / (2.0 * (fisher / 4.0).sqrt()))
}

/// `δε = 1/(2√(d²R/dε²|₀)) = 1/√F`
pub fn quantitative_resolution(meter: &MeterSpec, povm: &ReadoutPOVM, phi_b: f64) -> Result<f64> {
    delta_epsilon_from_fisher(fisher_information(meter, povm, phi_b)?, meter.tolerances())
}

/// First `ε > 0` where `R(φ_B, φ_B + ε)` reaches `level`, bracketed by a
/// forward scan in steps of `scale/16` and refined by bisection to 1e-10.
pub fn resolution_crossing(
    meter: &MeterSpec,
    povm: &ReadoutPOVM,
    phi_b: f64,
    level: f64,
    scale: f64,
) -> Result<Option<f64>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Ok(None);
    }
    let base = outcome_distribution(meter, povm, phi_b)?.probabilities;
    let r = |eps: f64| -> Result<f64> {
        let q = outcome_distribution(meter, povm, phi_b + eps)?.probabilities;
        Ok(squared_hellinger(&base, &q))
    };
    let step = scale / 16.0;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=16 * 64 {
        let eps = step * k as f64;
        if r(eps)? >= level {
            hi = Some(eps);
            break;
        }
        lo = eps;
    }
    let Some(mut hi) = hi else { return Ok(None) };
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if r(mid)? >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

pub fn sensitivity_report(sc: &MeasurementScenario, povm: &ReadoutPOVM, phi_b: f64) -> Result<SensitivityReport> {
    let meter = sc.meter();
    let tol = meter.tolerances();
    let fisher = fisher_information(meter, povm, phi_b)?;
    let delta_b = meter.generator_uncertainty();
    let qfi_bound = 4.0 * delta_b * delta_b / (meter.hbar() * meter.hbar());
    let delta_epsilon = match delta_epsilon_from_fisher(fisher, tol) {
        Ok(d) => d,
        Err(Error::NoSensitivity { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let (resolution_at_delta_epsilon, crossing_one_eighth) = if delta_epsilon.is_finite() {
        (
            Some(hellinger_resolution(meter, povm, phi_b, delta_epsilon)?),
            resolution_crossing(meter, povm, phi_b, RESOLUTION_LEVEL, delta_epsilon)?,
        )
    } else {
        (None, None)
    };
    Ok(SensitivityReport {
        fisher,
        second_derivative: fisher / 4.0,
        delta_epsilon,
        delta_b,
        qfi_bound,
        sensitivity: 1.0 / delta_epsilon,
        bound_satisfied: fisher <= qfi_bound + tol.bound,
        bound_gap: qfi_bound - fisher,
        delta_a: delta_epsilon / sc.coupling(),
        resolution_at_delta_epsilon,
        crossing_one_eighth,
    })
}
