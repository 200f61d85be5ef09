//! The ideal teleportation protocol on three photons.
//!
//! Photon 0 carries the input `|χ⟩`, photons 1 and 2 share a singlet. A
//! Bell-state measurement on photons 0 and 1 leaves photon 2 in a state that
//! is turned back into `|χ⟩` by an outcome-dependent single-photon unitary.

mod protocol;
mod swap;

pub use crate::polarization::BellOutcome;
pub use protocol::{
    bsm, bsm_distribution, correction_table, initial_state, teleport, teleport_postselected,
    teleport_state, BsmResult, CorrectionTable, Teleported,
};
pub use swap::{entanglement_swap, swap_partner, swap_source_state, SwapResult};
