//! Scenario files.
//!
//! A scenario is a UTF-8 JSON document. Complex numbers are `[re, im]` pairs
//! and matrices are row-major nested arrays:
//!
//! ```json
//! {
//!   "name": "qubit_unit",
//!   "hbar": 1.0,
//!   "coupling": 1.0,
//!   "system": { "observable": [[[0,0],[0,0]],[[0,0],[1,0]]],
//!               "state": [[0.7071067811865476,0],[0.7071067811865476,0]] },
//!   "meter": { "qubit": { "alpha": 0.0 } },
//!   "readout": { "qubit_angle": { "alpha": 0.0 } },
//!   "sweep": { "phi_b": 0.0, "eps_min": 0.0, "eps_max": 12.566370614359172, "steps": 201 }
//! }
//! ```
//!
//! `meter` is one of `qubit {alpha}`, `pointer {dim, sigma_b}` or
//! `explicit {generator, state}`. `readout` is one of `qubit_angle {alpha}`,
//! `projective {basis}` (rows are the basis vectors) or
//! `povm {elements, labels?}`; it may be omitted for qubit and pointer meters,
//! which then use their built-in readout.

use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::builders::{make_pointer_meter_with, make_qubit_meter_with, qubit_readout};
use crate::interaction::{MeasurementScenario, MeterSpec};
use crate::qcore::{ComplexMatrix, HermitianObservable, PureState};
use crate::sensitivity::ReadoutPOVM;
use crate::{Error, Result, Tolerances};

pub type ComplexEntry = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub coupling: f64,
    pub system: SystemConfig,
    pub meter: MeterConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<ReadoutConfig>,
    pub sweep: SweepSettings,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub observable: Vec<Vec<ComplexEntry>>,
    pub state: Vec<ComplexEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeterConfig {
    Qubit {
        alpha: f64,
    },
    Pointer {
        dim: usize,
        sigma_b: f64,
    },
    Explicit {
        generator: Vec<Vec<ComplexEntry>>,
        state: Vec<ComplexEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ReadoutConfig {
    QubitAngle {
        alpha: f64,
    },
    Projective {
        basis: Vec<Vec<ComplexEntry>>,
    },
    Povm {
        elements: Vec<Vec<Vec<ComplexEntry>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub phi_b: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    pub steps: usize,
}

impl SweepSettings {
    /// Uniform grid including both endpoints.
    pub fn uniform_grid(&self) -> Vec<f64> {
        let span = self.eps_max - self.eps_min;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.eps_max
                } else {
                    self.eps_min + span * k as f64 / last as f64
                }
            })
            .collect()
    }

    /// Geometric grid including both endpoints. A non-positive `eps_min` is
    /// replaced by `1e-4·eps_max`.
    pub fn log_grid(&self) -> Vec<f64> {
        let lo = if self.eps_min > 0.0 { self.eps_min } else { self.eps_max * 1e-4 };
        let ratio = (self.eps_max / lo).ln();
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.eps_max
                } else {
                    lo * (ratio * k as f64 / last as f64).exp()
                }
            })
            .collect()
    }

    pub fn grid(&self, log: bool) -> Vec<f64> {
        if log {
            self.log_grid()
        } else {
            self.uniform_grid()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!("steps must be at least 2, got {}", self.steps)).at("sweep.steps"));
        }
        if !(self.eps_min < self.eps_max) || !self.eps_min.is_finite() || !self.eps_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eps_min ({}) must be below eps_max ({})",
                self.eps_min, self.eps_max
            ))
            .at("sweep"));
        }
        if !self.phi_b.is_finite() {
            return Err(Error::InvalidParameter("phi_b must be finite".into()).at("sweep.phi_b"));
        }
        Ok(())
    }
}

/// A validated scenario ready for analysis.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub name: String,
    pub scenario: MeasurementScenario,
    pub povm: ReadoutPOVM,
    pub sweep: SweepSettings,
    pub config: ScenarioConfig,
}

impl LoadedScenario {
    /// True when the meter is the built-in qubit meter, for which the closed
    /// forms of [`super::QubitMeterOracle`] apply.
    pub fn is_qubit_meter(&self) -> bool {
        matches!(self.config.meter, MeterConfig::Qubit { .. })
    }

    /// Readout angle when the qubit closed forms apply.
    pub fn qubit_alpha(&self) -> Option<f64> {
        match (&self.config.meter, &self.config.readout) {
            (MeterConfig::Qubit { .. }, Some(ReadoutConfig::QubitAngle { alpha })) => Some(*alpha),
            (MeterConfig::Qubit { alpha }, None) => Some(*alpha),
            _ => None,
        }
    }
}

fn complex(e: &ComplexEntry) -> Complex64 {
    Complex64::new(e[0], e[1])
}

fn matrix(rows: &[Vec<ComplexEntry>], field: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(complex).collect()).collect();
    let m = ComplexMatrix::from_rows(&rows).map_err(|e| e.at(field))?;
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::InvalidParameter(format!("expected a non-empty square matrix, got {}x{}", m.rows(), m.cols())).at(field));
    }
    Ok(m)
}

fn observable(rows: &[Vec<ComplexEntry>], field: &str, tol: &Tolerances) -> Result<HermitianObservable> {
    HermitianObservable::with_tolerance(matrix(rows, field)?, tol.herm).map_err(|e| e.at(field))
}

fn state(entries: &[ComplexEntry], field: &str, tol: &Tolerances) -> Result<PureState> {
    let v = DVector::from_iterator(entries.len(), entries.iter().map(complex));
    PureState::with_tolerance(v, tol.norm).map_err(|e| e.at(field))
}

fn check_dim(found: usize, expected: usize, field: &str) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found }.at(field));
    }
    Ok(())
}

impl ScenarioConfig {
    /// Validates every embedded object and builds the scenario.
    pub fn build(&self, tol: &Tolerances) -> Result<LoadedScenario> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {}", self.hbar)).at("hbar"));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling must be positive, got {}", self.coupling)).at("coupling"));
        }
        self.sweep.validate()?;

        let a = observable(&self.system.observable, "system.observable", tol)?;
        let psi = state(&self.system.state, "system.state", tol)?;
        check_dim(psi.dim(), a.dim(), "system.state")?;

        let (meter, builtin) = match &self.meter {
            MeterConfig::Qubit { alpha } => {
                let (m, p) = make_qubit_meter_with(*alpha, self.hbar, *tol).map_err(|e| e.at("meter.qubit"))?;
                (m, Some(p))
            }
            MeterConfig::Pointer { dim, sigma_b } => {
                let (m, p) = make_pointer_meter_with(*dim, *sigma_b, self.hbar, *tol).map_err(|e| e.at("meter.pointer"))?;
                (m, Some(p))
            }
            MeterConfig::Explicit { generator, state: phi } => {
                let b = observable(generator, "meter.explicit.generator", tol)?;
                let phi = state(phi, "meter.explicit.state", tol)?;
                check_dim(phi.dim(), b.dim(), "meter.explicit.state")?;
                (MeterSpec::with_tolerances(phi, b, self.hbar, *tol)?, None)
            }
        };

        let povm = match (&self.readout, builtin) {
            (Some(ReadoutConfig::QubitAngle { alpha }), _) => {
                check_dim(meter.dim(), 2, "readout.qubit_angle")?;
                qubit_readout(*alpha, tol).map_err(|e| e.at("readout.qubit_angle"))?
            }
            (Some(ReadoutConfig::Projective { basis }), _) => {
                let m = matrix(basis, "readout.projective.basis")?;
                ReadoutPOVM::projective_rows(&m, None, tol).map_err(|e| e.at("readout.projective.basis"))?
            }
            (Some(ReadoutConfig::Povm { elements, labels }), _) => {
                let mats = elements
                    .iter()
                    .enumerate()
                    .map(|(k, e)| matrix(e, &format!("readout.povm.elements[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                ReadoutPOVM::from_elements(&mats, labels.clone(), tol).map_err(|e| e.at("readout.povm"))?
            }
            (None, Some(p)) => p,
            (None, None) => {
                return Err(Error::InvalidParameter("required for explicit meters".into()).at("readout"));
            }
        };
        check_dim(povm.dim(), meter.dim(), "readout")?;

        let scenario = MeasurementScenario::new(a, psi, meter, self.coupling)?;
        Ok(LoadedScenario {
            name: self.name.clone(),
            scenario,
            povm,
            sweep: self.sweep,
            config: self.clone(),
        })
    }
}

/// Parses scenario text; `origin` names the source in diagnostics.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path.is_empty() || path == "." {
            inner.to_string()
        } else {
            format!("field `{path}`: {inner}")
        };
        Error::Parse {
            path: origin.to_string(),
            message,
        }
    })
}

pub fn write_scenario(config: &ScenarioConfig) -> String {
    let mut s = serde_json::to_string_pretty(config).expect("scenario config serializes");
    s.push('\n');
    s
}

pub fn load_scenario(path: impl AsRef<Path>, tol: &Tolerances) -> Result<LoadedScenario> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: origin.clone(),
        source,
    })?;
    parse_scenario(&text, &origin)?.build(tol)
}
