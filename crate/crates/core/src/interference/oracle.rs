//! Brute-force two-photon beam-splitter expansion in the Fock basis.
//!
//! Each input photon occupies a mode `(port, polarization, time bin)`. The
//! beam splitter maps creation operators of the input ports onto the output
//! ports; the product of the two transformed creation operators is expanded
//! term by term and collected by output-mode occupation, with the bosonic
//! `√2` factor for doubly occupied modes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::polarization::PureState;
use crate::scalar::{c, czero, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSplitterConvention {
    /// Transmission `1/√2`, reflection `i/√2`.
    SymmetricPhase,
    /// `a → (c + d)/√2`, `b → (c - d)/√2`.
    RealHadamard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputPort {
    /// Detector f1.
    C,
    /// Detector f2.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutputMode {
    pub port: OutputPort,
    /// 0 = H, 1 = V
    pub polarization: u8,
    pub time_bin: u8,
}

/// Two photons entering opposite beam-splitter ports.
#[derive(Debug, Clone)]
pub struct TwoPhotonInput<T: Real> {
    /// Joint polarization state; photon 0 enters port a, photon 1 enters port b.
    pub polarization: PureState<T>,
    /// Photons occupy different time bins and cannot interfere.
    pub distinguishable: bool,
}

#[derive(Debug, Clone)]
pub struct OutputDistribution<T: Real> {
    pub probabilities: BTreeMap<(OutputMode, OutputMode), T>,
}

impl<T: Real> OutputDistribution<T> {
    pub fn total(&self) -> T {
        self.probabilities.values().fold(T::zero(), |a, &p| a + p)
    }

    /// One photon in each output port.
    pub fn coincidence_probability(&self) -> T {
        self.probabilities
            .iter()
            .filter(|((m1, m2), _)| m1.port != m2.port)
            .fold(T::zero(), |a, (_, &p)| a + p)
    }
}

fn port_amplitudes<T: Real>(
    input_port: usize,
    conv: BeamSplitterConvention,
) -> [(OutputPort, C<T>); 2] {
    let s = T::FRAC_1_SQRT_2();
    match (conv, input_port) {
        (BeamSplitterConvention::SymmetricPhase, 0) => [
            (OutputPort::C, c(s, T::zero())),
            (OutputPort::D, c(T::zero(), s)),
        ],
        (BeamSplitterConvention::SymmetricPhase, _) => [
            (OutputPort::C, c(T::zero(), s)),
            (OutputPort::D, c(s, T::zero())),
        ],
        (BeamSplitterConvention::RealHadamard, 0) => [
            (OutputPort::C, c(s, T::zero())),
            (OutputPort::D, c(s, T::zero())),
        ],
        (BeamSplitterConvention::RealHadamard, _) => [
            (OutputPort::C, c(s, T::zero())),
            (OutputPort::D, c(-s, T::zero())),
        ],
    }
}

/// Output port/polarization distribution for two photons at a 50:50 beam splitter.
pub fn bs_oracle<T: Real>(
    input: &TwoPhotonInput<T>,
    conv: BeamSplitterConvention,
) -> Result<OutputDistribution<T>> {
    if input.polarization.num_photons() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: input.polarization.num_photons(),
        });
    }
    let bin_b = u8::from(input.distinguishable);
    let mut amps: BTreeMap<(OutputMode, OutputMode), C<T>> = BTreeMap::new();
    for pa in 0..2u8 {
        for pb in 0..2u8 {
            let coeff = input.polarization.amplitudes()[(pa as usize) * 2 + pb as usize];
            if coeff == czero() {
                continue;
            }
            for (xa, ua) in port_amplitudes::<T>(0, conv) {
                for (xb, ub) in port_amplitudes::<T>(1, conv) {
                    let ma = OutputMode {
                        port: xa,
                        polarization: pa,
                        time_bin: 0,
                    };
                    let mb = OutputMode {
                        port: xb,
                        polarization: pb,
                        time_bin: bin_b,
                    };
                    let key = if ma <= mb { (ma, mb) } else { (mb, ma) };
                    let e = amps.entry(key).or_insert_with(czero);
                    *e = *e + coeff * ua * ub;
                }
            }
        }
    }
    let two = T::lit(2.0);
    let probabilities = amps
        .into_iter()
        .map(|((m1, m2), a)| {
            let p = if m1 == m2 {
                two * a.norm_sqr()
            } else {
                a.norm_sqr()
            };
            ((m1, m2), p)
        })
        .filter(|(_, p)| *p > T::zero())
        .collect();
    Ok(OutputDistribution { probabilities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::{bell_state, BellOutcome, PolarizationSpec};

    #[test]
    fn identical_photons_bunch() {
        let h = PolarizationSpec::Horizontal.state::<f64>();
        let input = TwoPhotonInput {
            polarization: h.tensor(&h),
            distinguishable: false,
        };
        let d = bs_oracle(&input, BeamSplitterConvention::SymmetricPhase).unwrap();
        assert!(d.coincidence_probability().abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singlet_antibunches() {
        let input = TwoPhotonInput {
            polarization: bell_state(BellOutcome::PsiMinus),
            distinguishable: false,
        };
        for conv in [
            BeamSplitterConvention::SymmetricPhase,
            BeamSplitterConvention::RealHadamard,
        ] {
            let d = bs_oracle::<f64>(&input, conv).unwrap();
            assert!((d.coincidence_probability() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distinguishable_photons_route_classically() {
        for b in BellOutcome::ALL {
            let input = TwoPhotonInput {
                polarization: bell_state::<f64>(b),
                distinguishable: true,
            };
            let d = bs_oracle(&input, BeamSplitterConvention::SymmetricPhase).unwrap();
            assert!((d.coincidence_probability() - 0.5).abs() < 1e-12);
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }
}
