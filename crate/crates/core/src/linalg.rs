//! Dense complex matrices sized for a handful of photons.
//!
//! Photon `0` is the most significant bit of a basis index; `H = 0`, `V = 1`.

use std::ops::{Index, IndexMut};

use crate::scalar::{cone, czero, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    /// Row-major construction. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let out = &mut m.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "mul_vec shape");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(czero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add shape"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "sub shape"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "diff shape"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square()
            && self
                .matmul(&self.adjoint())
                .max_abs_diff(&Self::identity(self.rows))
                <= tol
    }

    /// Hermitian `self` has no eigenvalue below `-tol`.
    ///
    /// Checked by a Cholesky factorization of `self + tol·I`, which succeeds
    /// exactly when the shifted matrix is positive definite.
    pub fn is_psd(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let shift = tol + tol;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re + shift;
            for k in 0..j {
                d = d - l[(j, k)].norm_sqr();
            }
            if d.is_nan() || d <= T::zero() {
                return false;
            }
            let djj = d.sqrt();
            l[(j, j)] = C::new(djj, T::zero());
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        true
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Bit mask of photon `p` in an `n`-photon basis index.
#[inline]
pub(crate) fn photon_bit(p: usize, n: usize) -> usize {
    1 << (n - 1 - p)
}

/// Offsets in the full index space for every local basis index over
/// `targets` (the first target is the most significant local bit).
pub(crate) fn local_offsets(targets: &[usize], n: usize) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(t, _)| l & (1 << (k - 1 - t)) != 0)
                .map(|(_, &p)| photon_bit(p, n))
                .sum()
        })
        .collect()
}

/// Apply a `2^k × 2^k` operator to photons `targets` of an `n`-photon
/// amplitude vector. Targets must be distinct and in range.
pub(crate) fn apply_local<T: Real>(
    amps: &[C<T>],
    n: usize,
    op: &Matrix<T>,
    targets: &[usize],
) -> Vec<C<T>> {
    let offsets = local_offsets(targets, n);
    let mask: usize = targets.iter().map(|&p| photon_bit(p, n)).sum();
    let dim = offsets.len();
    debug_assert_eq!(op.rows(), dim);
    let mut out = vec![czero(); amps.len()];
    let mut local = vec![czero::<T>(); dim];
    for base in (0..amps.len()).filter(|i| i & mask == 0) {
        for (slot, off) in local.iter_mut().zip(&offsets) {
            *slot = amps[base + off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = czero();
            for (col, v) in local.iter().enumerate() {
                acc = acc + op[(row, col)] * v;
            }
            out[base + off] = acc;
        }
    }
    out
}

/// Lift an operator on `targets` to the full `n`-photon space.
pub(crate) fn embed<T: Real>(op: &Matrix<T>, targets: &[usize], n: usize) -> Matrix<T> {
    let offsets = local_offsets(targets, n);
    let mask: usize = targets.iter().map(|&p| photon_bit(p, n)).sum();
    let dim = 1usize << n;
    let mut full = Matrix::zeros(dim, dim);
    for base in (0..dim).filter(|i| i & mask == 0) {
        for (r, ro) in offsets.iter().enumerate() {
            for (c, co) in offsets.iter().enumerate() {
                full[(base + ro, base + co)] = op[(r, c)];
            }
        }
    }
    full
}

/// Two-photon exchange operator.
pub fn swap_matrix<T: Real>() -> Matrix<T> {
    let mut m = Matrix::zeros(4, 4);
    m[(0, 0)] = cone();
    m[(1, 2)] = cone();
    m[(2, 1)] = cone();
    m[(3, 3)] = cone();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, creal};

    #[test]
    fn kron_of_identities_is_identity() {
        let a = Matrix::<f64>::identity(2);
        assert_eq!(a.kron(&Matrix::identity(4)), Matrix::identity(8));
    }

    #[test]
    fn embed_matches_kron_for_leading_targets() {
        let mut x = Matrix::<f64>::zeros(2, 2);
        x[(0, 1)] = cone();
        x[(1, 0)] = cone();
        let e = embed(&x, &[0], 3);
        assert_eq!(e, x.kron(&Matrix::identity(4)));
        let e2 = embed(&x, &[2], 3);
        assert_eq!(e2, Matrix::identity(4).kron(&x));
    }

    #[test]
    fn apply_local_agrees_with_embedded_matmul() {
        let mut op = Matrix::<f64>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                op[(i, j)] = c((i * 4 + j) as f64 * 0.1, (i as f64) - (j as f64));
            }
        }
        let amps: Vec<_> = (0..8).map(|i| c(i as f64, 0.5 * i as f64)).collect();
        let local = apply_local(&amps, 3, &op, &[2, 0]);
        let full = embed(&op, &[2, 0], 3).mul_vec(&amps);
        for (a, b) in local.iter().zip(&full) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn psd_check_rejects_negative_eigenvalue() {
        let mut m = Matrix::<f64>::identity(2);
        assert!(m.is_psd(1e-10));
        m[(1, 1)] = creal(-1e-6);
        assert!(!m.is_psd(1e-10));
        m[(1, 1)] = creal(-1e-11);
        assert!(m.is_psd(1e-10));
    }

    #[test]
    fn swap_is_unitary_and_hermitian() {
        let s = swap_matrix::<f64>();
        assert!(s.is_unitary(1e-12));
        assert!(s.is_hermitian(1e-12));
    }
}
