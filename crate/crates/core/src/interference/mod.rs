//! Two-photon interference at the Bell-state analyzer's beam splitter.

mod oracle;
mod overlap;
mod povm;

pub use oracle::{
    bs_oracle, BeamSplitterConvention, OutputDistribution, OutputMode, OutputPort, TwoPhotonInput,
};
pub use overlap::{overlap, ModeOverlapModel, OverlapShape};
pub use povm::{
    antisymmetric_projector, coincidence_probability, conditional_state, threefold_rates,
    CoincidencePovm,
};
