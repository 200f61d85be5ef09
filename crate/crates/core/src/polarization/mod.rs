//! Multi-photon polarization states: pure states, density operators,
//! operators on designated photons, and projective measurement.

mod bell;
mod density;
mod measure;
mod operator;
mod spec;
mod state;

pub use bell::{bell_projectors, bell_state, BellOutcome};
pub use density::DensityOperator;
pub(crate) use measure::measure_trusted;
pub use measure::validate_projector_set;
pub use measure::{
    born_probabilities, fidelity, measure_projective, measure_projective_on, partial_trace, tensor,
    Measurement, Projectable, Tensor,
};
pub use operator::Operator;
pub use spec::{parse_complex, PolarizationSpec};
pub use state::{make_qubit, PureState};
