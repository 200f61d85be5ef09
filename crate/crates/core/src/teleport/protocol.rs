use rand::Rng;

use crate::error::{Error, Result};
use crate::polarization::{
    bell_projectors, bell_state, born_probabilities, measure_projective_on, BellOutcome,
    DensityOperator, Operator, PolarizationSpec, PureState,
};
use crate::scalar::Real;

/// `|χ⟩₀ ⊗ ψ⁻₁₂`
pub fn initial_state<T: Real>(chi: &PureState<T>) -> PureState<T> {
    chi.tensor(&bell_state(BellOutcome::PsiMinus))
}

#[derive(Debug, Clone)]
pub struct BsmResult<T: Real> {
    pub outcome: BellOutcome,
    /// Conditional state of the third photon.
    pub photon3: DensityOperator<T>,
    /// Full post-measurement state of all three photons.
    pub joint: PureState<T>,
    pub probability: f64,
}

/// Bell-state measurement on photons 0 and 1 of a three-photon state.
pub fn bsm<T: Real, R: Rng + ?Sized>(state3: &PureState<T>, rng: &mut R) -> Result<BsmResult<T>> {
    if state3.num_photons() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state3.num_photons(),
        });
    }
    let m = measure_projective_on(state3, &bell_projectors(), &[0, 1], rng)?;
    let photon3 = m.state.to_density().partial_trace(&[2])?;
    Ok(BsmResult {
        outcome: BellOutcome::from_index(m.outcome).expect("four Bell projectors"),
        photon3,
        joint: m.state,
        probability: m.probability,
    })
}

/// Exact outcome probabilities of the Bell-state measurement, in
/// [`BellOutcome::ALL`] order.
pub fn bsm_distribution<T: Real>(state3: &PureState<T>) -> Result<[T; 4]> {
    if state3.num_photons() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state3.num_photons(),
        });
    }
    let p = born_probabilities(state3, &bell_projectors(), &[0, 1])?;
    Ok([p[0], p[1], p[2], p[3]])
}

/// Outcome-conditioned single-photon corrections, defined up to global phase.
#[derive(Debug, Clone)]
pub struct CorrectionTable<T: Real> {
    entries: [Operator<T>; 4],
}

impl<T: Real> CorrectionTable<T> {
    pub fn get(&self, outcome: BellOutcome) -> &Operator<T> {
        &self.entries[outcome.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellOutcome, &Operator<T>)> {
        BellOutcome::ALL.iter().map(move |&o| (o, self.get(o)))
    }
}

/// ψ⁻ → I, ψ⁺ → Z, φ⁻ → X, φ⁺ → Z·X.
pub fn correction_table<T: Real>() -> CorrectionTable<T> {
    let x = Operator::pauli_x();
    let z = Operator::pauli_z();
    let zx = z.then_after(&x).expect("2x2 product");
    CorrectionTable {
        entries: [Operator::identity(1), z, x, zx],
    }
}

#[derive(Debug, Clone)]
pub struct Teleported<T: Real> {
    pub outcome: BellOutcome,
    pub state: DensityOperator<T>,
}

/// Run the full protocol for an arbitrary input qubit.
pub fn teleport_state<T: Real, R: Rng + ?Sized>(
    chi: &PureState<T>,
    rng: &mut R,
) -> Result<Teleported<T>> {
    if chi.num_photons() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: chi.num_photons(),
        });
    }
    let r = bsm(&initial_state(chi), rng)?;
    let state = r
        .photon3
        .conjugate_by(correction_table().get(r.outcome), &[0])?;
    Ok(Teleported {
        outcome: r.outcome,
        state,
    })
}

pub fn teleport<T: Real, R: Rng + ?Sized>(input: &PolarizationSpec, rng: &mut R) -> Teleported<T> {
    teleport_state(&input.state(), rng).expect("single-photon input")
}

/// Keep only the ψ⁻ outcome, which needs no correction.
pub fn teleport_postselected<T: Real, R: Rng + ?Sized>(
    input: &PolarizationSpec,
    rng: &mut R,
) -> Option<DensityOperator<T>> {
    let r = bsm(&initial_state(&input.state::<T>()), rng).expect("three-photon input");
    (r.outcome == BellOutcome::PsiMinus).then_some(r.photon3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::fidelity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn outcome_distribution_is_uniform_for_named_inputs() {
        for p in PolarizationSpec::TABLE {
            let d = bsm_distribution(&initial_state(&p.state::<f64>())).unwrap();
            for q in d {
                assert!((q - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singlet_outcome_leaves_input_on_photon_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let chi = PolarizationSpec::RightCircular.state::<f64>();
        let mut seen = false;
        for _ in 0..64 {
            let r = bsm(&initial_state(&chi), &mut rng).unwrap();
            if r.outcome == BellOutcome::PsiMinus {
                assert!((fidelity(&r.photon3, &chi).unwrap() - 1.0).abs() < 1e-12);
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn table_entries_are_unitary() {
        let t = correction_table::<f64>();
        for (_, u) in t.iter() {
            assert!(u.is_unitary());
        }
        assert!(t
            .get(BellOutcome::PsiMinus)
            .equals_up_to_phase(&Operator::identity(1), 1e-12));
    }

    #[test]
    fn rejects_wrong_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let two = bell_state::<f64>(BellOutcome::PsiMinus);
        assert!(matches!(
            bsm(&two, &mut rng),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
