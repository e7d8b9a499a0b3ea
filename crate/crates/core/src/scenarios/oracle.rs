/// Closed forms for the qubit meter of [`super::make_qubit_meter`].
#[derive(Debug, Clone, Copy, Default)]
pub struct QubitMeterOracle;

impl QubitMeterOracle {
    /// `1 - |cos(ε/2)|`, exact at the readout-aligned working point
    /// `α + φ_B ≡ 0 (mod π)`.
    pub fn resolution(eps: f64) -> f64 {
        1.0 - (eps / 2.0).cos().abs()
    }

    /// `1 - |cos(ε/2)|` for every working point.
    pub fn decoherence(eps: f64) -> f64 {
        1.0 - (eps / 2.0).cos().abs()
    }

    /// Resolution at an arbitrary working point `x = α + φ_B`:
    /// `1 - |cos(x/2)cos(y/2)| - |sin(x/2)sin(y/2)|` with `y = x + ε`.
    pub fn resolution_at(alpha: f64, phi_b: f64, eps: f64) -> f64 {
        let x = (alpha + phi_b) / 2.0;
        let y = x + eps / 2.0;
        1.0 - (x.cos() * y.cos()).abs() - (x.sin() * y.sin()).abs()
    }

    /// `(cos²((α+φ_B)/2), sin²((α+φ_B)/2))`
    pub fn probabilities(alpha: f64, phi_b: f64) -> [f64; 2] {
        let h = (alpha + phi_b) / 2.0;
        [h.cos().powi(2), h.sin().powi(2)]
    }
}

/// Continuum limit of the pointer meter: `1 - exp(-σ_B² ε² / 2ħ²)`.
pub fn gaussian_decoherence(sigma_b: f64, hbar: f64, eps: f64) -> f64 {
    -(-(sigma_b * eps / hbar).powi(2) / 2.0).exp_m1()
}
