//! Simulation of photonic quantum teleportation.
//!
//! The crate is layered bottom-up:
//!
//! - [`polarization`]: pure and mixed polarization states of a few photons,
//!   generic over the scalar type ([`Real`], implemented for `f32` and `f64`).
//! - [`teleport`]: the ideal protocol with a complete Bell-state measurement,
//!   outcome-conditioned corrections, post-selection and entanglement swapping.
//! - [`interference`]: the beam-splitter Bell-state analyzer with partial
//!   temporal distinguishability, expressed as a two-outcome POVM and checked
//!   against a brute-force Fock-space expansion.
//! - [`experiment`]: the pulsed two-pass down-conversion setup with
//!   double-pair emission, a Monte Carlo engine, and an exact enumeration of
//!   the same model that serves as its oracle.

pub mod error;
pub mod experiment;
pub mod interference;
pub mod linalg;
pub mod polarization;
pub mod scalar;
pub mod teleport;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PureState64 = polarization::PureState<f64>;
pub type PureState32 = polarization::PureState<f32>;
pub type DensityOperator64 = polarization::DensityOperator<f64>;
pub type DensityOperator32 = polarization::DensityOperator<f32>;
pub type Operator64 = polarization::Operator<f64>;
pub type Operator32 = polarization::Operator<f32>;
pub type CoincidencePovm64 = interference::CoincidencePovm<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
