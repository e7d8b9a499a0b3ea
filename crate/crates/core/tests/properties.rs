use meterbench_core::backaction::{characteristic_function, decoherence_curve, tradeoff_report};
use meterbench_core::interaction::{apply_interaction, dephasing_factor, reduced_output_in_eigenbasis, Method};
use meterbench_core::qcore::{
    evolve_by_generator, partial_trace, tensor_product, ComplexMatrix, Factor, HermitianObservable, PureState,
};
use meterbench_core::scenarios::{make_random_scenario, parse_scenario, write_scenario, MeterConfig, ScenarioConfig, SweepSettings, SystemConfig};
use meterbench_core::sensitivity::{fisher_information, hellinger_resolution, outcome_distribution};
use meterbench_core::{Complex64, Tolerances};
use nalgebra::DVector;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn state(dim: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec(complex(), dim)
        .prop_filter("non-zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(DVector::from_vec(v)).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = HermitianObservable> {
    prop::collection::vec(complex(), dim * dim).prop_map(move |v| {
        let m = ComplexMatrix::from_fn(dim, dim, |i, j| 0.5 * (v[i * dim + j] + v[j * dim + i].conj()));
        HermitianObservable::new(m).unwrap()
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), rows * cols).prop_map(move |v| ComplexMatrix::from_row_major(rows, cols, v).unwrap())
}

fn random_case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 2usize..=5, 2usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigensystem_is_unitary_and_reconstructs(obs in (1usize..=6).prop_flat_map(hermitian)) {
        prop_assert!(obs.reconstruction_error() <= 1e-10);
        prop_assert!(obs.eigenvectors().unitarity_defect() <= 1e-10);
        prop_assert!(obs.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn evolution_preserves_norm(
        (s, g) in (1usize..=6).prop_flat_map(|d| (state(d), hermitian(d))),
        theta in -20.0..20.0f64,
    ) {
        let out = evolve_by_generator(&s, &g, theta, 1.0).unwrap();
        prop_assert!((out.amplitudes().norm_squared() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn partial_trace_is_a_density_matrix(
        (ds, dm, s) in (1usize..=4, 1usize..=4).prop_flat_map(|(a, b)| (Just(a), Just(b), state(a * b))),
        keep_system in any::<bool>(),
    ) {
        let keep = if keep_system { Factor::System } else { Factor::Meter };
        let rho = partial_trace(&s.density_matrix(), ds, dm, keep).unwrap();
        prop_assert!((rho.matrix().trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
        prop_assert!(rho.spectrum().unwrap().iter().all(|&l| l >= -1e-10));
    }

    #[test]
    fn tensor_product_is_associative(x in matrix(2, 2), y in matrix(2, 2), z in matrix(2, 2)) {
        let left = tensor_product(&tensor_product(&x, &y), &z);
        let right = tensor_product(&x, &tensor_product(&y, &z));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn interaction_routes_agree((seed, ds, dm) in random_case()) {
        let (sc, _) = make_random_scenario(seed, ds, dm).unwrap();
        let direct = apply_interaction(&sc, Method::Direct).unwrap();
        for method in [Method::SystemExpansion, Method::MeterExpansion] {
            prop_assert!(direct.max_abs_diff(&apply_interaction(&sc, method).unwrap()) <= 1e-10);
        }
        let rho = reduced_output_in_eigenbasis(&sc).unwrap();
        let c = sc.system_amplitudes();
        let a = sc.system_observable().eigenvalues();
        for i in 0..ds {
            prop_assert!((rho.get(i, i).re - c[i].norm_sqr()).abs() <= 1e-10);
            for j in 0..ds {
                let f = dephasing_factor(&sc, i, j).unwrap();
                prop_assert!(f.norm() <= 1.0 + 1e-12);
                if a[i] == a[j] {
                    prop_assert_eq!(f, Complex64::new(1.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn resolution_laws((seed, dm) in (any::<u64>(), 2usize..=6), phi_b in -3.0..3.0f64) {
        let (sc, povm) = make_random_scenario(seed, 2, dm).unwrap();
        let meter = sc.meter();
        prop_assert_eq!(hellinger_resolution(meter, &povm, phi_b, 0.0).unwrap(), 0.0);
        let f = fisher_information(meter, &povm, phi_b).unwrap();
        let db = meter.generator_uncertainty();
        prop_assert!(f <= 4.0 * db * db + 1e-9);
        // R/ε² → F/8. Only the even part is compared at finite ε: the odd
        // part carries an O(ε) correction whose coefficient is unbounded
        // near zero-probability outcomes.
        let qfi = 4.0 * db * db;
        let r = |eps: f64| hellinger_resolution(meter, &povm, phi_b, eps).unwrap();
        let min_p = outcome_distribution(meter, &povm, phi_b).unwrap().probabilities.into_iter().fold(1.0, f64::min);
        if f >= 0.1 * qfi && min_p >= 1e-2 {
            let even = 0.5 * (r(1e-3) + r(-1e-3)) / 1e-6;
            prop_assert!((even - f / 8.0).abs() <= 1e-3 * f / 8.0, "even part {even} vs F/8 = {}", f / 8.0);
        }
        for k in -8..=8 {
            let r = hellinger_resolution(meter, &povm, phi_b, k as f64 * 0.7).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn characteristic_function_laws((seed, dm) in (any::<u64>(), 2usize..=6), eps in -10.0..10.0f64) {
        let (sc, povm) = make_random_scenario(seed, 2, dm).unwrap();
        let meter = sc.meter();
        prop_assert_eq!(characteristic_function(meter, 0.0), Complex64::new(1.0, 0.0));
        let chi = characteristic_function(meter, eps);
        prop_assert!(chi.norm() <= 1.0 + 1e-12);
        prop_assert!((characteristic_function(meter, -eps) - chi.conj()).norm() <= 1e-12);
        let d = decoherence_curve(meter, &[eps, -eps, 0.0]).values;
        prop_assert!((0.0..=1.0).contains(&d[0]));
        prop_assert!((d[0] - d[1]).abs() <= 1e-12);
        prop_assert_eq!(d[2], 0.0);
        // Scaled by the full spectral width so that every phase stays small.
        let eigen = meter.generator().eigenvalues();
        let small = 1e-3 / (eigen[eigen.len() - 1] - eigen[0]);
        let db = meter.generator_uncertainty();
        let ds = decoherence_curve(meter, &[small]).values[0];
        prop_assert!((ds / (small * small) - db * db / 2.0).abs() <= 1e-3 * db * db / 2.0);
        let offsets: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
        let report = tradeoff_report(&sc, &povm, 0.0, &offsets).unwrap();
        prop_assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn scenario_files_round_trip(
        name in "[a-z_]{1,12}",
        hbar in 0.1..3.0f64,
        coupling in 0.1..5.0f64,
        entries in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 4),
        alpha in -10.0..10.0f64,
        dim in 16usize..128,
        pointer in any::<bool>(),
        (eps_min, span, steps) in (-5.0..5.0f64, 0.01..20.0f64, 2usize..500),
    ) {
        let e: Vec<[f64; 2]> = entries.iter().map(|&(a, b)| [a, b]).collect();
        let cfg = ScenarioConfig {
            name,
            hbar,
            coupling,
            system: SystemConfig {
                observable: vec![vec![e[0], e[1]], vec![e[2], e[3]]],
                state: vec![e[1], e[2]],
            },
            meter: if pointer { MeterConfig::Pointer { dim, sigma_b: hbar * alpha.abs() } } else { MeterConfig::Qubit { alpha } },
            readout: None,
            sweep: SweepSettings { phi_b: alpha, eps_min, eps_max: eps_min + span, steps },
        };
        let text = write_scenario(&cfg);
        prop_assert_eq!(parse_scenario(&text, "generated").unwrap(), cfg);
    }
}

#[test]
fn strict_profile_tightens_everything() {
    let d = Tolerances::default();
    let s = Tolerances::strict();
    assert!(s.herm < d.herm && s.prob < d.prob && s.bound < d.bound);
}
