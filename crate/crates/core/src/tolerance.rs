//! Numerical tolerances shared by validation and audits.
//!
//! All comparisons are max-abs unless stated otherwise.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity check.
    pub herm: f64,
    /// Eigen-reconstruction and unitarity.
    pub eig: f64,
    /// State normalization and unit trace.
    pub norm: f64,
    /// Lowest admissible eigenvalue (as `-psd`) of a positive operator.
    pub psd: f64,
    /// POVM completeness.
    pub povm: f64,
    /// Probabilities below this are treated as zero in Fisher sums.
    pub prob: f64,
    /// Slack for inequality audits.
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            eig: 1e-10,
            norm: 1e-10,
            psd: 1e-10,
            povm: 1e-10,
            prob: 1e-12,
            bound: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn strict() -> Self {
        Tolerances {
            herm: 1e-12,
            eig: 1e-12,
            norm: 1e-12,
            psd: 1e-12,
            povm: 1e-12,
            prob: 1e-14,
            bound: 1e-11,
        }
    }

    /// Looks up a named profile (`default` or `strict`).
    pub fn profile(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "" | "default" => Some(Self::default()),
            "strict" => Some(Self::strict()),
            _ => None,
        }
    }
}
