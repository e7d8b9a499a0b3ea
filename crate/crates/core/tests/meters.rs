use meterbench_core::backaction::{decoherence_curve, decoherence_free_distance};
use meterbench_core::interaction::MeasurementScenario;
use meterbench_core::qcore::{HermitianObservable, PureState};
use meterbench_core::scenarios::{gaussian_decoherence, make_pointer_meter, make_qubit_meter, make_random_scenario, QubitMeterOracle};
use meterbench_core::sensitivity::{fisher_information, hellinger_resolution};
use meterbench_core::Complex64;
use nalgebra::DVector;

fn pointer_deviation(dim: usize) -> f64 {
    let (meter, _) = make_pointer_meter(dim, 1.0, 1.0).unwrap();
    let offsets: Vec<f64> = (-300..=300).map(|k| k as f64 * 0.01).collect();
    let d = decoherence_curve(&meter, &offsets);
    offsets
        .iter()
        .zip(&d.values)
        .map(|(&e, &v)| (v - gaussian_decoherence(1.0, 1.0, e)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn pointer_converges_with_dimension() {
    let devs: Vec<f64> = [32, 64, 128, 256].iter().map(|&n| pointer_deviation(n)).collect();
    assert!(devs[1] <= 1e-6, "{devs:?}");
    for w in devs.windows(2) {
        // Halving, or already at the rounding floor.
        assert!(w[1] <= (0.5 * w[0]).max(1e-10), "{devs:?}");
    }
}

#[test]
fn pointer_decoherence_free_distance() {
    let (meter, _) = make_pointer_meter(64, 1.0, 1.0).unwrap();
    let sc = MeasurementScenario::new(
        HermitianObservable::from_diagonal(&[0.0, 1.0]),
        PureState::normalized(DVector::from_element(2, Complex64::new(1.0, 0.0))).unwrap(),
        meter,
        1.0,
    )
    .unwrap();
    let c = decoherence_free_distance(&sc).unwrap();
    assert!((c.closed - 0.5).abs() < 0.5e-4);
    assert!(c.relative_gap() < 1e-4);
}

#[test]
fn qubit_oracle_over_angles() {
    for k in 0..10 {
        let alpha = -3.0 + 0.61 * k as f64;
        let (meter, povm) = make_qubit_meter(alpha, 1.0).unwrap();
        let phi_b = -alpha;
        for j in 0..1000 {
            let eps = 4.0 * std::f64::consts::PI * j as f64 / 999.0;
            let r = hellinger_resolution(&meter, &povm, phi_b, eps).unwrap();
            assert!((r - QubitMeterOracle::resolution(eps)).abs() < 1e-12);
        }
        for phi in [0.0, 0.4, 2.2] {
            assert!((fisher_information(&meter, &povm, phi).unwrap() - 1.0).abs() < 1e-12);
            let r = hellinger_resolution(&meter, &povm, phi, 1.3).unwrap();
            assert!((r - QubitMeterOracle::resolution_at(alpha, phi, 1.3)).abs() < 1e-12);
        }
    }
}

#[test]
fn decoherence_small_offset_law_on_random_meters() {
    for seed in 1..=100u64 {
        let (sc, _) = make_random_scenario(seed, 2, 2 + (seed as usize % 5)).unwrap();
        let meter = sc.meter();
        let db = meter.generator_uncertainty();
        let eps = 1e-3 / db;
        let d = decoherence_curve(meter, &[eps]).values[0];
        let want = db * db / 2.0;
        assert!((d / (eps * eps) - want).abs() <= 1e-3 * want, "seed {seed}");
    }
}
