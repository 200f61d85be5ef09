//! Scalar abstraction for the state algebra.
//!
//! The linear algebra behind pure states, density operators and the
//! beam-splitter POVM is written once over [`Real`] and instantiated for
//! `f32` and `f64`. The experiment simulation works in `f64` only.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;

/// Floating-point scalar usable as the real part of state amplitudes.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for algebraic identities (unitarity, trace, hermiticity).
    const ALGEBRA_TOL: Self;
    /// Tolerance for user-supplied amplitude normalization.
    const INPUT_TOL: Self;
    /// Lower bound accepted for density-operator eigenvalues.
    const EIGEN_TOL: Self;
    /// Slack allowed when checking that projectors sum to identity.
    const COMPLETENESS_TOL: Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Uniform sample in `[0, 1)`.
    #[inline]
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::lit(rng.random::<f64>())
    }
}

impl Real for f64 {
    const ALGEBRA_TOL: Self = 1e-12;
    const INPUT_TOL: Self = 1e-9;
    const EIGEN_TOL: Self = 1e-10;
    const COMPLETENESS_TOL: Self = 1e-10;
}

impl Real for f32 {
    const ALGEBRA_TOL: Self = 1e-5;
    const INPUT_TOL: Self = 1e-5;
    const EIGEN_TOL: Self = 1e-5;
    const COMPLETENESS_TOL: Self = 1e-5;
}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
