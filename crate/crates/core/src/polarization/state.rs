use crate::error::{Error, Result};
use crate::linalg::{apply_local, photon_bit};
use crate::polarization::{DensityOperator, Operator};
use crate::scalar::{c, creal, czero, Real, C};

/// Pure polarization state of `num_photons` photons.
///
/// Amplitudes are indexed with photon 0 as the most significant bit and
/// `H = 0`, `V = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    num_photons: usize,
    amps: Vec<C<T>>,
}

/// Single-photon state `alpha|H⟩ + beta|V⟩`.
pub fn make_qubit<T: Real>(alpha: C<T>, beta: C<T>) -> Result<PureState<T>> {
    PureState::from_amplitudes(vec![alpha, beta])
}

pub(crate) fn check_photons(indices: &[usize], num_photons: usize) -> Result<()> {
    for (i, &p) in indices.iter().enumerate() {
        if p >= num_photons || indices[..i].contains(&p) {
            return Err(Error::BadIndex {
                index: p,
                num_photons,
            });
        }
    }
    Ok(())
}

pub(crate) fn photons_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

impl<T: Real> PureState<T> {
    /// Build from user-supplied amplitudes. The squared norm must be within
    /// [`Real::INPUT_TOL`] of one; the stored vector is renormalized.
    pub fn from_amplitudes(amps: Vec<C<T>>) -> Result<Self> {
        let num_photons = photons_for_dim(amps.len()).ok_or(Error::DimensionMismatch {
            expected: amps.len().next_power_of_two().max(2),
            found: amps.len(),
        })?;
        let norm_sqr = amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        let dev = (norm_sqr - T::one()).abs();
        if dev.is_nan() || dev > T::INPUT_TOL {
            return Err(Error::NotNormalized {
                norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN),
            });
        }
        let inv = creal(T::one() / norm_sqr.sqrt());
        Ok(Self {
            num_photons,
            amps: amps.into_iter().map(|a| a * inv).collect(),
        })
    }

    pub(crate) fn from_raw(num_photons: usize, amps: Vec<C<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_photons);
        Self { num_photons, amps }
    }

    /// Computational basis state; `index` uses the photon-0-most-significant order.
    pub fn basis(num_photons: usize, index: usize) -> Self {
        assert!(
            num_photons >= 1 && index < 1 << num_photons,
            "basis index out of range"
        );
        let mut amps = vec![czero(); 1 << num_photons];
        amps[index] = creal(T::one());
        Self { num_photons, amps }
    }

    pub fn num_photons(&self) -> usize {
        self.num_photons
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Kronecker product; `self`'s photons come first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Self {
            num_photons: self.num_photons + other.num_photons,
            amps,
        }
    }

    /// Multiply every amplitude by `e^{i·phase}`.
    pub fn with_global_phase(&self, phase: T) -> Self {
        let ph = c(phase.cos(), phase.sin());
        Self {
            num_photons: self.num_photons,
            amps: self.amps.iter().map(|a| a * ph).collect(),
        }
    }

    /// Exchange photons `a` and `b`.
    pub fn swap_photons(&self, a: usize, b: usize) -> Result<Self> {
        check_photons(&[a, b], self.num_photons)
            .or_else(|e| if a == b { Ok(()) } else { Err(e) })?;
        let (ba, bb) = (
            photon_bit(a, self.num_photons),
            photon_bit(b, self.num_photons),
        );
        let mut amps = self.amps.clone();
        for (i, slot) in amps.iter_mut().enumerate() {
            let bits_differ = ((i & ba) != 0) != ((i & bb) != 0);
            let j = if bits_differ { i ^ ba ^ bb } else { i };
            *slot = self.amps[j];
        }
        Ok(Self {
            num_photons: self.num_photons,
            amps,
        })
    }

    /// Apply a unitary acting on `targets`.
    pub fn apply_unitary(&self, op: &Operator<T>, targets: &[usize]) -> Result<Self> {
        self.check_targets(op, targets)?;
        if !op.is_unitary() {
            return Err(Error::InvalidMatrix("operator is not unitary".into()));
        }
        Ok(Self::from_raw(
            self.num_photons,
            apply_local(&self.amps, self.num_photons, op.matrix(), targets),
        ))
    }

    /// `op|ψ⟩` without any renormalization.
    pub(crate) fn apply_raw(&self, op: &Operator<T>, targets: &[usize]) -> Self {
        Self::from_raw(
            self.num_photons,
            apply_local(&self.amps, self.num_photons, op.matrix(), targets),
        )
    }

    /// `⟨ψ|op|ψ⟩` for an operator on `targets` (real part).
    pub fn expectation(&self, op: &Operator<T>, targets: &[usize]) -> Result<T> {
        self.check_targets(op, targets)?;
        let applied = apply_local(&self.amps, self.num_photons, op.matrix(), targets);
        Ok(self
            .amps
            .iter()
            .zip(&applied)
            .fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re))
    }

    pub(crate) fn check_targets(&self, op: &Operator<T>, targets: &[usize]) -> Result<()> {
        check_photons(targets, self.num_photons)?;
        if op.num_photons() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: targets.len(),
                found: op.num_photons(),
            });
        }
        Ok(())
    }

    pub fn to_density(&self) -> DensityOperator<T> {
        DensityOperator::from_pure(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::PolarizationSpec;

    #[test]
    fn make_qubit_accepts_basis_and_superpositions() {
        let h = make_qubit::<f64>(c(1.0, 0.0), czero()).unwrap();
        assert_eq!(h, PureState::basis(1, 0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = make_qubit(c(s, 0.0), c(s, 0.0)).unwrap();
        let diag = PolarizationSpec::Diagonal.state::<f64>();
        assert!((d.inner(&diag).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(make_qubit(c(0.6, 0.0), c(0.0, 0.8)).is_ok());
    }

    #[test]
    fn make_qubit_rejects_unnormalized() {
        let err = make_qubit(c(0.6, 0.0), c(0.0, 0.9_f64)).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn tensor_basis_index() {
        let h = PureState::<f64>::basis(1, 0);
        let v = PureState::<f64>::basis(1, 1);
        assert_eq!(h.tensor(&v), PureState::basis(2, 1));
        assert_eq!(v.tensor(&h), PureState::basis(2, 2));
    }

    #[test]
    fn swap_photons_permutes_basis() {
        let s = PureState::<f64>::basis(3, 0b100);
        assert_eq!(s.swap_photons(0, 2).unwrap(), PureState::basis(3, 0b001));
        assert!(s.swap_photons(0, 3).is_err());
    }
}
