use rand::Rng;

use crate::error::{Error, Result};
use crate::polarization::state::check_photons;
use crate::polarization::{DensityOperator, Operator, PureState};
use crate::scalar::Real;

/// States that can be projected and renormalized.
pub trait Projectable<T: Real>: Sized + Clone {
    fn photon_count(&self) -> usize;

    /// Unnormalized branch `P|ψ⟩` or `PρP` with its Born weight.
    fn project(&self, projector: &Operator<T>, targets: &[usize]) -> (Self, T);

    /// Divide the branch by its weight.
    fn renormalized(self, weight: T) -> Self;
}

impl<T: Real> Projectable<T> for PureState<T> {
    fn photon_count(&self) -> usize {
        self.num_photons()
    }

    fn project(&self, projector: &Operator<T>, targets: &[usize]) -> (Self, T) {
        let branch = self.apply_raw(projector, targets);
        let w = branch.norm_sqr();
        (branch, w)
    }

    fn renormalized(self, weight: T) -> Self {
        let s = T::one() / weight.sqrt();
        let n = self.num_photons();
        let amps = self.amplitudes().iter().map(|a| a.scale(s)).collect();
        PureState::from_raw(n, amps)
    }
}

impl<T: Real> Projectable<T> for DensityOperator<T> {
    fn photon_count(&self) -> usize {
        self.num_photons()
    }

    fn project(&self, projector: &Operator<T>, targets: &[usize]) -> (Self, T) {
        let branch = self.sandwich(projector, targets);
        let w = branch.trace();
        (branch, w)
    }

    fn renormalized(self, weight: T) -> Self {
        self.scaled(T::one() / weight)
    }
}

/// A sampled projective measurement.
#[derive(Debug, Clone)]
pub struct Measurement<S> {
    pub outcome: usize,
    pub state: S,
    pub probability: f64,
}

/// Measure with projectors acting on the whole system.
pub fn measure_projective<T, S, R>(
    state: &S,
    projectors: &[Operator<T>],
    rng: &mut R,
) -> Result<Measurement<S>>
where
    T: Real,
    S: Projectable<T>,
    R: Rng + ?Sized,
{
    let targets: Vec<usize> = (0..state.photon_count()).collect();
    measure_projective_on(state, projectors, &targets, rng)
}

/// Measure with projectors acting on the photons in `targets`.
pub fn measure_projective_on<T, S, R>(
    state: &S,
    projectors: &[Operator<T>],
    targets: &[usize],
    rng: &mut R,
) -> Result<Measurement<S>>
where
    T: Real,
    S: Projectable<T>,
    R: Rng + ?Sized,
{
    check_photons(targets, state.photon_count())?;
    check_completeness(projectors, targets.len())?;
    Ok(measure_trusted(state, projectors, targets, rng))
}

/// [`measure_projective_on`] for projector sets and targets already validated by the caller.
pub(crate) fn measure_trusted<T, S, R>(
    state: &S,
    projectors: &[Operator<T>],
    targets: &[usize],
    rng: &mut R,
) -> Measurement<S>
where
    T: Real,
    S: Projectable<T>,
    R: Rng + ?Sized,
{
    let branches: Vec<(S, T)> = projectors
        .iter()
        .map(|p| state.project(p, targets))
        .collect();
    let total = branches.iter().fold(T::zero(), |acc, (_, w)| acc + *w);
    let u = T::sample_unit(rng) * total;
    let mut acc = T::zero();
    let mut chosen = branches.len() - 1;
    for (k, (_, w)) in branches.iter().enumerate() {
        acc = acc + *w;
        if u < acc && *w > T::zero() {
            chosen = k;
            break;
        }
    }
    // trailing zero-weight outcomes can never be selected
    while branches[chosen].1 <= T::zero() && chosen > 0 {
        chosen -= 1;
    }
    let (branch, w) = branches
        .into_iter()
        .nth(chosen)
        .expect("chosen branch exists");
    Measurement {
        outcome: chosen,
        probability: (w / total).to_f64().unwrap_or(f64::NAN),
        state: branch.renormalized(w),
    }
}

/// Check that `projectors` on `k` photons resolve the identity.
pub fn validate_projector_set<T: Real>(projectors: &[Operator<T>], k: usize) -> Result<()> {
    check_completeness(projectors, k)
}

/// Exact Born probabilities for projectors on `targets`.
pub fn born_probabilities<T, S>(
    state: &S,
    projectors: &[Operator<T>],
    targets: &[usize],
) -> Result<Vec<T>>
where
    T: Real,
    S: Projectable<T>,
{
    check_photons(targets, state.photon_count())?;
    check_completeness(projectors, targets.len())?;
    Ok(projectors
        .iter()
        .map(|p| state.project(p, targets).1)
        .collect())
}

fn check_completeness<T: Real>(projectors: &[Operator<T>], k: usize) -> Result<()> {
    let Some(first) = projectors.first() else {
        return Err(Error::IncompleteProjectorSet { deviation: 1.0 });
    };
    if let Some(bad) = projectors.iter().find(|p| p.num_photons() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: bad.num_photons(),
        });
    }
    let mut sum = first.clone();
    for p in &projectors[1..] {
        sum = sum.add(p)?;
    }
    let deviation = sum.max_abs_diff(&Operator::identity(k));
    if deviation > T::COMPLETENESS_TOL {
        return Err(Error::IncompleteProjectorSet {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// `⟨target|ρ|target⟩`, clamped to `[0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityOperator<T>, target: &PureState<T>) -> Result<T> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: target.dim(),
        });
    }
    let m = rho.matrix();
    let a = target.amplitudes();
    let mut acc = T::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            acc = acc + (ai.conj() * m[(i, j)] * aj).re;
        }
    }
    Ok(acc.max(T::zero()).min(T::one()))
}

/// Kronecker composition shared by pure and mixed states.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl<T: Real> Tensor for PureState<T> {
    fn tensor(&self, other: &Self) -> Self {
        PureState::tensor(self, other)
    }
}

impl<T: Real> Tensor for DensityOperator<T> {
    fn tensor(&self, other: &Self) -> Self {
        DensityOperator::tensor(self, other)
    }
}

pub fn tensor<S: Tensor>(a: &S, b: &S) -> S {
    a.tensor(b)
}

pub fn partial_trace<T: Real>(
    rho: &DensityOperator<T>,
    keep: &[usize],
) -> Result<DensityOperator<T>> {
    rho.partial_trace(keep)
}
