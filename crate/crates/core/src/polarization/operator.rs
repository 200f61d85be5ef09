use crate::error::{Error, Result};
use crate::linalg::{swap_matrix, Matrix};
use crate::polarization::state::photons_for_dim;
use crate::polarization::PureState;
use crate::scalar::{c, cone, creal, czero, Real, C};

/// Square operator acting on `num_photons` designated photons.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real> {
    num_photons: usize,
    matrix: Matrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let num_photons = photons_for_dim(matrix.rows()).ok_or_else(|| {
            Error::InvalidMatrix(format!("dimension {} is not 2^k", matrix.rows()))
        })?;
        Ok(Self {
            num_photons,
            matrix,
        })
    }

    pub fn identity(num_photons: usize) -> Self {
        Self {
            num_photons,
            matrix: Matrix::identity(1 << num_photons),
        }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(state: &PureState<T>) -> Self {
        Self {
            num_photons: state.num_photons(),
            matrix: Matrix::outer(state.amplitudes(), state.amplitudes()),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_2x2([[czero(), cone()], [cone(), czero()]])
    }

    pub fn pauli_z() -> Self {
        Self::from_2x2([[cone(), czero()], [czero(), -cone::<T>()]])
    }

    pub fn pauli_y() -> Self {
        Self::from_2x2([
            [czero(), c(T::zero(), -T::one())],
            [c(T::zero(), T::one()), czero()],
        ])
    }

    /// Two-photon exchange.
    pub fn swap() -> Self {
        Self {
            num_photons: 2,
            matrix: swap_matrix(),
        }
    }

    pub fn from_2x2(m: [[C<T>; 2]; 2]) -> Self {
        Self {
            num_photons: 1,
            matrix: Matrix::from_vec(2, 2, vec![m[0][0], m[0][1], m[1][0], m[1][1]]),
        }
    }

    pub fn num_photons(&self) -> usize {
        self.num_photons
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            num_photons: self.num_photons,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Operator product `self · other`.
    pub fn then_after(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            num_photons: self.num_photons,
            matrix: self.matrix.matmul(&other.matrix),
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            num_photons: self.num_photons + other.num_photons,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            num_photons: self.num_photons,
            matrix: self.matrix.add(&other.matrix),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            num_photons: self.num_photons,
            matrix: self.matrix.sub(&other.matrix),
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            num_photons: self.num_photons,
            matrix: self.matrix.scale(creal(s)),
        }
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    pub fn is_unitary(&self) -> bool {
        self.matrix.is_unitary(T::ALGEBRA_TOL)
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian(T::ALGEBRA_TOL)
    }

    pub fn is_psd(&self) -> bool {
        self.is_hermitian() && self.matrix.is_psd(T::EIGEN_TOL)
    }

    /// Hermitian and idempotent.
    pub fn is_projector(&self) -> bool {
        self.is_hermitian()
            && self.matrix.matmul(&self.matrix).max_abs_diff(&self.matrix) <= T::ALGEBRA_TOL
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Equality up to a global phase factor.
    pub fn equals_up_to_phase(&self, other: &Self, tol: T) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        // relative phase taken from the largest entry of `self`
        let (idx, _) =
            self.matrix
                .as_slice()
                .iter()
                .enumerate()
                .fold((0, T::zero()), |(bi, bv), (i, z)| {
                    if z.norm() > bv {
                        (i, z.norm())
                    } else {
                        (bi, bv)
                    }
                });
        let a = self.matrix.as_slice()[idx];
        let b = other.matrix.as_slice()[idx];
        if b.norm() <= tol {
            return a.norm() <= tol
                && other
                    .matrix
                    .max_abs_diff(&Matrix::zeros(self.dim(), self.dim()))
                    <= tol;
        }
        let phase = a / b;
        let phase = phase / creal(phase.norm());
        self.matrix.max_abs_diff(&other.matrix.scale(phase)) <= tol
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_are_unitary_and_hermitian() {
        for p in [
            Operator::<f64>::pauli_x(),
            Operator::pauli_y(),
            Operator::pauli_z(),
        ] {
            assert!(p.is_unitary());
            assert!(p.is_hermitian());
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Operator::<f64>::new(Matrix::identity(3)).is_err());
        assert!(Operator::<f64>::new(Matrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn phase_equality() {
        let z = Operator::<f64>::pauli_z();
        let iz = Operator::new(z.matrix().scale(c(0.0, 1.0))).unwrap();
        assert!(z.equals_up_to_phase(&iz, 1e-12));
        assert!(!z.equals_up_to_phase(&Operator::pauli_x(), 1e-12));
    }
}
