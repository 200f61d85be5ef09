use rand::Rng;

use crate::error::Result;
use crate::polarization::{
    bell_projectors, bell_state, measure_projective_on, BellOutcome, DensityOperator, PureState,
};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct SwapResult<T: Real> {
    pub outcome: BellOutcome,
    /// State of the two outer photons (0 and 3).
    pub outer: DensityOperator<T>,
    pub probability: f64,
}

/// Bell state left on the outer photons for a given middle-pair outcome.
///
/// Starting from two singlets, the outer pair ends up in the same Bell state
/// that the middle pair was projected onto.
pub fn swap_partner(outcome: BellOutcome) -> BellOutcome {
    outcome
}

/// `ψ⁻₀₁ ⊗ ψ⁻₂₃`
pub fn swap_source_state<T: Real>() -> PureState<T> {
    let s = bell_state(BellOutcome::PsiMinus);
    s.tensor(&s)
}

/// Bell-state measurement on photons 1 and 2 of two independent singlets.
pub fn entanglement_swap<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Result<SwapResult<T>> {
    let m = measure_projective_on(&swap_source_state::<T>(), &bell_projectors(), &[1, 2], rng)?;
    let outer = m.state.to_density().partial_trace(&[0, 3])?;
    Ok(SwapResult {
        outcome: BellOutcome::from_index(m.outcome).expect("four Bell projectors"),
        outer,
        probability: m.probability,
    })
}
