use crate::error::{Error, Result};
use crate::polarization::{bell_state, BellOutcome, DensityOperator, Operator, PolarizationSpec};
use crate::scalar::Real;

/// Two-outcome beam-splitter POVM for photons with temporal overlap `v`.
///
/// With weight `v²` the photons interfere and a coincidence projects onto
/// the singlet; with weight `1 - v²` they route independently:
/// `E_coinc = ½((1 - v²) I + 2 v² Π_anti)`, `E_same = I - E_coinc`.
#[derive(Debug, Clone)]
pub struct CoincidencePovm<T: Real> {
    v: T,
    coinc: Operator<T>,
    same_side: Operator<T>,
}

/// `|ψ⁻⟩⟨ψ⁻|`
pub fn antisymmetric_projector<T: Real>() -> Operator<T> {
    Operator::projector(&bell_state(BellOutcome::PsiMinus))
}

fn check_overlap<T: Real>(v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(Error::OutOfRange {
            name: "v",
            value: v.to_f64().unwrap_or(f64::NAN),
            range: "[0, 1]",
        });
    }
    Ok(())
}

impl<T: Real> CoincidencePovm<T> {
    pub fn new(v: T) -> Result<Self> {
        check_overlap(v)?;
        let half = T::lit(0.5);
        let v2 = v * v;
        let coinc = Operator::identity(2)
            .scale(half * (T::one() - v2))
            .add(&antisymmetric_projector().scale(v2))
            .expect("two-photon operators");
        let same_side = Operator::identity(2)
            .sub(&coinc)
            .expect("two-photon operators");
        Ok(Self {
            v,
            coinc,
            same_side,
        })
    }

    pub fn overlap(&self) -> T {
        self.v
    }

    /// One photon behind each output port.
    pub fn element_coinc(&self) -> &Operator<T> {
        &self.coinc
    }

    /// Both photons behind the same (either) output port.
    pub fn element_same_side(&self) -> &Operator<T> {
        &self.same_side
    }

    /// Both photons behind one specific output port; half of the same-side element.
    pub fn element_one_port(&self) -> Operator<T> {
        self.same_side.scale(T::lit(0.5))
    }
}

/// `Tr[ρ₁₂ E_coinc(v)] = ½(1 - v² Tr[ρ₁₂ SWAP])`
pub fn coincidence_probability<T: Real>(rho12: &DensityOperator<T>, v: T) -> Result<T> {
    if rho12.num_photons() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho12.num_photons(),
        });
    }
    let povm = CoincidencePovm::new(v)?;
    rho12.expectation(povm.element_coinc(), &[0, 1])
}

/// Condition photons 0,1,2 on a beam-splitter coincidence of photons 0 and 1.
/// Returns the coincidence probability and the renormalized state of photon 2.
pub fn conditional_state<T: Real>(
    rho123: &DensityOperator<T>,
    v: T,
) -> Result<(T, DensityOperator<T>)> {
    if rho123.num_photons() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho123.num_photons(),
        });
    }
    let povm = CoincidencePovm::new(v)?;
    let e = povm.element_coinc().tensor(&Operator::identity(1));
    // Tr₁₂[(E ⊗ I) ρ]: E acts only on the traced photons, so it may be applied on one side.
    let applied = DensityOperator::from_raw(3, e.matrix().matmul(rho123.matrix()));
    let unnorm = applied.partial_trace(&[2])?;
    let p = unnorm.trace();
    let pf = p.to_f64().unwrap_or(0.0);
    if pf.is_nan() || pf < 1e-15 {
        return Err(Error::ZeroProbability {
            probability: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((p, unnorm.scaled(T::one() / p)))
}

/// Three-fold probabilities for an ideal single-pair input `|χ⟩ ⊗ ψ⁻`:
/// `(p_orth, p_par)` with the analyzer behind the third photon set to `χ⊥`
/// and `χ` respectively.
pub fn threefold_rates<T: Real>(chi: &PolarizationSpec, v: T) -> Result<(T, T)> {
    check_overlap(v)?;
    let input = chi
        .state::<T>()
        .tensor(&bell_state(BellOutcome::PsiMinus))
        .to_density();
    let (p, rho3) = conditional_state(&input, v)?;
    let par = rho3.expectation(&Operator::projector(&chi.state()), &[0])?;
    let orth = rho3.expectation(&Operator::projector(&chi.orthogonal().state()), &[0])?;
    Ok((p * orth, p * par))
}
