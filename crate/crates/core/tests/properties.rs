use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teleport_core::experiment::{run_delay, ExperimentConfig, SourceConfig};
use teleport_core::interference::{coincidence_probability, CoincidencePovm};
use teleport_core::polarization::{
    fidelity, make_qubit, DensityOperator, Operator, PolarizationSpec, PureState,
};
use teleport_core::teleport::{bsm_distribution, initial_state, teleport_state};

fn qubit() -> impl Strategy<Value = PureState<f64>> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(t, p)| {
        make_qubit(
            Complex64::new((t / 2.0).cos(), 0.0),
            Complex64::from_polar((t / 2.0).sin(), p),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn teleportation_is_perfect(chi in qubit(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = teleport_state(&chi, &mut rng).unwrap();
        prop_assert!(fidelity(&t.state, &chi).unwrap() > 1.0 - 1e-10);
        for p in bsm_distribution(&initial_state(&chi)).unwrap() {
            prop_assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn povm_is_valid_for_any_overlap(v in 0.0f64..=1.0) {
        let povm = CoincidencePovm::new(v).unwrap();
        prop_assert!(povm.element_coinc().is_psd() && povm.element_same_side().is_psd());
        let sum = povm.element_coinc().add(povm.element_same_side()).unwrap();
        prop_assert!(sum.max_abs_diff(&Operator::identity(2)) < 1e-12);
    }

    #[test]
    fn coincidence_probability_is_bounded(a in qubit(), b in qubit(), v in 0.0f64..=1.0) {
        let p = coincidence_probability(&a.tensor(&b).to_density(), v).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        // product states never exceed the classical half
        prop_assert!(p <= 0.5 + 1e-12);
    }

    #[test]
    fn partial_trace_recovers_factors(a in qubit(), b in qubit()) {
        let rho = a.to_density().tensor(&b.to_density());
        prop_assert!(rho.partial_trace(&[0]).unwrap().max_abs_diff(&a.to_density()) < 1e-12);
        prop_assert!(rho.partial_trace(&[1]).unwrap().max_abs_diff(&b.to_density()) < 1e-12);
        let mixed = DensityOperator::mixture(&[(0.3, a.to_density()), (0.7, b.to_density())]).unwrap();
        prop_assert!((mixed.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spec_round_trips_through_text(a in qubit()) {
        let amps = a.amplitudes();
        let spec = PolarizationSpec::custom(amps[0], amps[1]).unwrap();
        let back: PolarizationSpec = spec.to_string().parse().unwrap();
        prop_assert!(fidelity(&back.state::<f64>().to_density(), &spec.state()).unwrap() > 1.0 - 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tallies_respect_the_count_hierarchy(
        m1 in 0.05f64..=0.5,
        m2 in 0.05f64..=0.5,
        max in 1usize..=3,
        delay in -800.0f64..800.0,
        blocked in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let c = ExperimentConfig {
            source: SourceConfig { mean_pairs_pass1: m1, mean_pairs_pass2: m2, max_pairs_per_pass: max, ..Default::default() },
            block_photon1_path: blocked,
            seed,
            ..Default::default()
        };
        let t = run_delay(&c, delay, 0, 5_000);
        prop_assert!(t.is_consistent());
        prop_assert_eq!(t, run_delay(&c, delay, 0, 5_000));
    }
}
