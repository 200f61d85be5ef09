use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OverlapShape {
    #[default]
    Gaussian,
}

/// Maps the arrival-time delay between the two beam-splitter photons to the
/// temporal-mode overlap `v`.
///
/// `v(δ) = v_max · exp(-δ² / (2 s²))` where the scale `s` is fixed by
/// requiring the two-fold dip, which goes as `v²`, to have a full width at
/// half maximum equal to the coherence time: `s = τ_c / (2 √ln 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeOverlapModel {
    pub shape: OverlapShape,
    pub coherence_time_fs: f64,
    /// Recorded for reference; the overlap shape depends only on the coherence time.
    pub pump_pulse_duration_fs: f64,
    /// Peak overlap at zero delay.
    pub v_max: f64,
}

impl Default for ModeOverlapModel {
    fn default() -> Self {
        Self {
            shape: OverlapShape::Gaussian,
            coherence_time_fs: 520.0,
            pump_pulse_duration_fs: 200.0,
            v_max: 1.0,
        }
    }
}

impl ModeOverlapModel {
    pub fn with_v_max(self, v_max: f64) -> Self {
        Self { v_max, ..self }
    }

    /// Gaussian standard width of `v(δ)` in femtoseconds.
    pub fn scale_fs(&self) -> f64 {
        self.coherence_time_fs / (2.0 * std::f64::consts::LN_2.sqrt())
    }

    pub fn overlap(&self, delay_fs: f64) -> f64 {
        match self.shape {
            OverlapShape::Gaussian => {
                let s = self.scale_fs();
                self.v_max * (-delay_fs * delay_fs / (2.0 * s * s)).exp()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coherence_time_fs > 0.0 && self.coherence_time_fs.is_finite()) {
            return Err(Error::OutOfRange {
                name: "coherence_time_fs",
                value: self.coherence_time_fs,
                range: "(0, inf)",
            });
        }
        if !(0.0..=1.0).contains(&self.v_max) {
            return Err(Error::OutOfRange {
                name: "v_max",
                value: self.v_max,
                range: "[0, 1]",
            });
        }
        Ok(())
    }
}

pub fn overlap(model: &ModeOverlapModel, delay_fs: f64) -> f64 {
    model.overlap(delay_fs)
}
