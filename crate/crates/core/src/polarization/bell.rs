use std::fmt;

use serde::{Deserialize, Serialize};

use crate::polarization::{Operator, PureState};
use crate::scalar::{creal, czero, Real};

/// One of the four maximally entangled two-photon states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PsiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PhiPlus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellOutcome::PsiMinus => "psi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PhiPlus => "phi+",
        })
    }
}

/// `ψ± = (|HV⟩ ± |VH⟩)/√2`, `φ± = (|HH⟩ ± |VV⟩)/√2`.
pub fn bell_state<T: Real>(kind: BellOutcome) -> PureState<T> {
    let s = creal(T::FRAC_1_SQRT_2());
    let z = czero();
    let amps = match kind {
        BellOutcome::PsiMinus => vec![z, s, -s, z],
        BellOutcome::PsiPlus => vec![z, s, s, z],
        BellOutcome::PhiMinus => vec![s, z, z, -s],
        BellOutcome::PhiPlus => vec![s, z, z, s],
    };
    PureState::from_raw(2, amps)
}

/// Projectors onto the four Bell states, in [`BellOutcome::ALL`] order.
pub fn bell_projectors<T: Real>() -> Vec<Operator<T>> {
    BellOutcome::ALL
        .iter()
        .map(|&b| Operator::projector(&bell_state(b)))
        .collect()
}
