//! Independent checks of the derived tables and of the POVM against brute force.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teleport_core::experiment::{
    analytic_rates, analytic_scan, ideal_config, run_delay, spurious_config, visibility, Channel,
    DetectorConfig,
};
use teleport_core::interference::{
    bs_oracle, coincidence_probability, conditional_state, BeamSplitterConvention, CoincidencePovm,
    TwoPhotonInput,
};
use teleport_core::polarization::{
    bell_projectors, bell_state, born_probabilities, fidelity, make_qubit, measure_projective_on,
    BellOutcome, DensityOperator, Operator, Projectable, PureState,
};
use teleport_core::teleport::{
    correction_table, initial_state, swap_partner, swap_source_state, teleport_state,
};

fn random_qubit(rng: &mut impl Rng) -> PureState<f64> {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    make_qubit(
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    )
    .unwrap()
}

fn branch_photon(
    state: &PureState<f64>,
    projector: &Operator<f64>,
    on: &[usize],
    keep: &[usize],
) -> DensityOperator<f64> {
    let (branch, w) = state.project(projector, on);
    branch
        .renormalized(w)
        .to_density()
        .partial_trace(keep)
        .unwrap()
}

#[test]
fn correction_table_is_the_unique_fix_among_paulis() {
    let x = Operator::<f64>::pauli_x();
    let z = Operator::<f64>::pauli_z();
    let candidates = [
        ("I", Operator::identity(1)),
        ("X", x.clone()),
        ("Z", z.clone()),
        ("ZX", z.then_after(&x).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let inputs: Vec<_> = (0..20).map(|_| random_qubit(&mut rng)).collect();
    let table = correction_table::<f64>();
    for (k, proj) in bell_projectors::<f64>().iter().enumerate() {
        let outcome = BellOutcome::from_index(k).unwrap();
        let fixes: Vec<_> = candidates
            .iter()
            .filter(|(_, u)| {
                inputs.iter().all(|chi| {
                    let rho = branch_photon(&initial_state(chi), proj, &[0, 1], &[2]);
                    fidelity(&rho.conjugate_by(u, &[0]).unwrap(), chi).unwrap() > 1.0 - 1e-10
                })
            })
            .collect();
        assert_eq!(fixes.len(), 1, "{outcome}");
        assert!(
            fixes[0].1.equals_up_to_phase(table.get(outcome), 1e-12),
            "{outcome}: found {}",
            fixes[0].0
        );
    }
}

#[test]
fn swap_partner_matches_projection() {
    for (k, proj) in bell_projectors::<f64>().iter().enumerate() {
        let outcome = BellOutcome::from_index(k).unwrap();
        let outer = branch_photon(&swap_source_state(), proj, &[1, 2], &[0, 3]);
        let matches: Vec<_> = BellOutcome::ALL
            .into_iter()
            .filter(|b| fidelity(&outer, &bell_state(*b)).unwrap() > 1.0 - 1e-10)
            .collect();
        assert_eq!(matches, vec![swap_partner(outcome)]);
    }
}

fn test_inputs() -> Vec<PureState<f64>> {
    let mut v: Vec<_> = BellOutcome::ALL.iter().map(|b| bell_state(*b)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        v.push(random_qubit(&mut rng).tensor(&random_qubit(&mut rng)));
    }
    v
}

#[test]
fn povm_matches_brute_force_at_both_endpoints_and_conventions() {
    for psi in test_inputs() {
        let rho = psi.to_density();
        for conv in [
            BeamSplitterConvention::SymmetricPhase,
            BeamSplitterConvention::RealHadamard,
        ] {
            for (v, distinguishable) in [(1.0, false), (0.0, true)] {
                let d = bs_oracle(
                    &TwoPhotonInput {
                        polarization: psi.clone(),
                        distinguishable,
                    },
                    conv,
                )
                .unwrap();
                assert!((d.total() - 1.0).abs() < 1e-10);
                let p = coincidence_probability(&rho, v).unwrap();
                assert!((d.coincidence_probability() - p).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn coincidence_is_affine_in_v_squared() {
    for psi in test_inputs() {
        let rho = psi.to_density();
        let c0 = coincidence_probability(&rho, 0.0).unwrap();
        let c1 = coincidence_probability(&rho, 1.0).unwrap();
        for v in [0.1, 0.35, 0.6, 0.85] {
            let expect = (1.0 - v * v) * c0 + v * v * c1;
            assert!((coincidence_probability(&rho, v).unwrap() - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn ignoring_the_beam_splitter_outcome_leaves_photon_three_alone() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let paulis = [
        Operator::identity(1),
        Operator::pauli_x(),
        Operator::pauli_y(),
        Operator::pauli_z(),
    ];
    for _ in 0..5 {
        let input = initial_state(&random_qubit(&mut rng)).to_density();
        let reduced = input.partial_trace(&[2]).unwrap();
        for v in [0.0, 0.5, 1.0] {
            let (p, rho3) = conditional_state(&input, v).unwrap();
            let povm = CoincidencePovm::new(v).unwrap();
            for o in &paulis {
                let same = input
                    .expectation(&povm.element_same_side().tensor(o), &[0, 1, 2])
                    .unwrap();
                let mixed = p * rho3.expectation(o, &[0]).unwrap() + same;
                assert!((mixed - reduced.expectation(o, &[0]).unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_outcomes_follow_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = random_qubit(&mut rng).tensor(&random_qubit(&mut rng));
    let projectors = bell_projectors::<f64>();
    let p = born_probabilities(&psi, &projectors, &[0, 1]).unwrap();
    let n = 100_000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        counts[measure_projective_on(&psi, &projectors, &[0, 1], &mut rng)
            .unwrap()
            .outcome] += 1;
    }
    let mut chi2 = 0.0;
    for k in 0..4 {
        let expect = p[k] * n as f64;
        let sigma = (n as f64 * p[k] * (1.0 - p[k])).sqrt();
        assert!((counts[k] as f64 - expect).abs() < 4.0 * sigma);
        chi2 += (counts[k] as f64 - expect).powi(2) / expect;
    }
    // 3 degrees of freedom, p = 1e-4
    assert!(chi2 < 21.1, "chi2 = {chi2}");
}

#[test]
fn single_precision_protocol() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..50 {
        let q = random_qubit(&mut rng);
        let a = q.amplitudes();
        let chi = make_qubit(
            num_complex::Complex32::new(a[0].re as f32, a[0].im as f32),
            num_complex::Complex32::new(a[1].re as f32, a[1].im as f32),
        )
        .unwrap();
        let t = teleport_state(&chi, &mut rng).unwrap();
        assert!(fidelity(&t.state, &chi).unwrap() > 1.0 - 1e-5);
    }
}

#[test]
fn monte_carlo_matches_oracle_with_lossy_detectors() {
    let mut c = spurious_config().unwrap();
    c.source.mean_pairs_pass1 = 0.3;
    c.source.mean_pairs_pass2 = 0.3;
    c.detectors = DetectorConfig {
        f1: 0.6,
        f2: 0.8,
        d1: 0.5,
        d2: 0.9,
        p: 0.7,
    };
    c.overlap_model.v_max = 0.9;
    let n = 300_000;
    for (i, delay) in [0.0, 250.0, 2000.0].into_iter().enumerate() {
        for cfg in [c.clone(), c.blocked()] {
            let exact = analytic_rates(&cfg, delay).unwrap().as_array();
            let mc = run_delay(&cfg, delay, i as u64, n).rates().as_array();
            for k in 0..7 {
                let sigma = (exact[k] * (1.0 - exact[k]) / n as f64).sqrt();
                assert!(
                    (mc[k] - exact[k]).abs() <= 4.0 * sigma.max(1e-12),
                    "delay {delay} channel {k}"
                );
            }
        }
    }
}

#[test]
fn ratios_are_invariant_under_uniform_efficiency() {
    let ideal = ideal_config();
    let mut lossy = ideal.clone();
    lossy.detectors = DetectorConfig::uniform(0.5);
    let a = analytic_scan(&ideal).unwrap();
    let b = analytic_scan(&lossy).unwrap();
    for ch in Channel::ALL {
        assert!(
            (visibility(&a, ch).unwrap().value - visibility(&b, ch).unwrap().value).abs() < 1e-12
        );
    }
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert!(
            (ra.rates.d1f1f2 / ra.rates.d2f1f2 - rb.rates.d1f1f2 / rb.rates.d2f1f2).abs() < 1e-12
        );
        assert!((rb.rates.d1f1f2 - 0.125 * ra.rates.d1f1f2).abs() < 1e-15);
    }
}
