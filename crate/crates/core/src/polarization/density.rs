use crate::error::{Error, Result};
use crate::linalg::{embed, local_offsets, Matrix};
use crate::polarization::state::{check_photons, photons_for_dim};
use crate::polarization::{Operator, PureState};
use crate::scalar::{creal, czero, Real};

/// Mixed polarization state of `num_photons` photons.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real> {
    num_photons: usize,
    matrix: Matrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix("density matrix must be square".into()));
        }
        let num_photons = photons_for_dim(matrix.rows()).ok_or_else(|| {
            Error::InvalidMatrix(format!("dimension {} is not 2^n", matrix.rows()))
        })?;
        if !matrix.is_hermitian(T::ALGEBRA_TOL) {
            return Err(Error::InvalidMatrix(
                "density matrix is not Hermitian".into(),
            ));
        }
        let tr = matrix.trace();
        if (tr - creal(T::one())).norm() > T::ALGEBRA_TOL {
            return Err(Error::InvalidMatrix(format!("trace {tr} differs from 1")));
        }
        if !matrix.is_psd(T::EIGEN_TOL) {
            return Err(Error::InvalidMatrix(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self {
            num_photons,
            matrix,
        })
    }

    pub(crate) fn from_raw(num_photons: usize, matrix: Matrix<T>) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << num_photons);
        Self {
            num_photons,
            matrix,
        }
    }

    pub fn from_pure(state: &PureState<T>) -> Self {
        Self::from_raw(
            state.num_photons(),
            Matrix::outer(state.amplitudes(), state.amplitudes()),
        )
    }

    /// `I / 2^n`
    pub fn maximally_mixed(num_photons: usize) -> Self {
        let d = 1usize << num_photons;
        Self::from_raw(
            num_photons,
            Matrix::identity(d).scale(creal(T::one() / T::lit(d as f64))),
        )
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(T, DensityOperator<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidMatrix("empty mixture".into()))?;
        let mut acc = Matrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if rho.dim() != first.1.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.1.dim(),
                    found: rho.dim(),
                });
            }
            acc = acc.add(&rho.matrix.scale(creal(*w)));
        }
        Self::new(acc)
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

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_raw(
            self.num_photons + other.num_photons,
            self.matrix.kron(&other.matrix),
        )
    }

    /// Reduced state on `keep` (0-based photon indices). Kept photons retain
    /// their relative order in the output.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::BadIndex {
                index: 0,
                num_photons: 0,
            });
        }
        check_photons(keep, self.num_photons)?;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (0..self.num_photons)
            .filter(|p| !kept.contains(p))
            .collect();
        let keep_off = local_offsets(&kept, self.num_photons);
        let trace_off = if traced.is_empty() {
            vec![0]
        } else {
            local_offsets(&traced, self.num_photons)
        };
        let dk = keep_off.len();
        let mut out = Matrix::zeros(dk, dk);
        for (a, ao) in keep_off.iter().enumerate() {
            for (b, bo) in keep_off.iter().enumerate() {
                out[(a, b)] = trace_off
                    .iter()
                    .fold(czero(), |acc, r| acc + self.matrix[(ao + r, bo + r)]);
            }
        }
        Ok(Self::from_raw(kept.len(), out))
    }

    /// `U ρ U†` for a unitary on `targets`.
    pub fn conjugate_by(&self, op: &Operator<T>, targets: &[usize]) -> Result<Self> {
        self.check_targets(op, targets)?;
        if !op.is_unitary() {
            return Err(Error::InvalidMatrix("operator is not unitary".into()));
        }
        Ok(self.sandwich(op, targets))
    }

    /// `O ρ O†` with no normalization.
    pub(crate) fn sandwich(&self, op: &Operator<T>, targets: &[usize]) -> Self {
        let full = embed(op.matrix(), targets, self.num_photons);
        Self::from_raw(
            self.num_photons,
            full.matmul(&self.matrix).matmul(&full.adjoint()),
        )
    }

    /// `Tr[ρ · O]` for `O` on `targets` (real part).
    pub fn expectation(&self, op: &Operator<T>, targets: &[usize]) -> Result<T> {
        self.check_targets(op, targets)?;
        let full = embed(op.matrix(), targets, self.num_photons);
        Ok(self.matrix.matmul(&full).trace().re)
    }

    pub(crate) fn scaled(&self, s: T) -> Self {
        Self::from_raw(self.num_photons, self.matrix.scale(creal(s)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }

    fn check_targets(&self, op: &Operator<T>, targets: &[usize]) -> Result<()> {
        check_photons(targets, self.num_photons)?;
        if op.num_photons() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: targets.len(),
                found: op.num_photons(),
            });
        }
        Ok(())
    }
}
