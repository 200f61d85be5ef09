use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::ModeOverlapModel;
use crate::polarization::PolarizationSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EmissionStatistics {
    /// Poisson weights `μⁿ/n!` cut at `max_pairs_per_pass` and renormalized.
    #[default]
    PoissonTruncated,
}

/// Pair emission of the two crystal passes of one pump pulse.
///
/// Pass 1 emits pair (2,3): photon 2 goes to the Bell analyzer, photon 3 to
/// Bob. Pass 2 emits pair (1,4): photon 1 is prepared and sent to the
/// analyzer, photon 4 goes to the trigger detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub mean_pairs_pass1: f64,
    pub mean_pairs_pass2: f64,
    pub max_pairs_per_pass: usize,
    #[serde(default)]
    pub emission_statistics: EmissionStatistics,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            mean_pairs_pass1: 0.1,
            mean_pairs_pass2: 0.1,
            max_pairs_per_pass: 2,
            emission_statistics: EmissionStatistics::PoissonTruncated,
        }
    }
}

/// Largest number of pairs per pass the Monte Carlo engine accepts.
pub const MAX_PAIRS_MONTE_CARLO: usize = 3;

impl SourceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, m) in [
            ("mean_pairs_pass1", self.mean_pairs_pass1),
            ("mean_pairs_pass2", self.mean_pairs_pass2),
        ] {
            if !(m > 0.0 && m <= 0.5) {
                return Err(Error::OutOfRange {
                    name,
                    value: m,
                    range: "(0, 0.5]",
                });
            }
        }
        if !(1..=MAX_PAIRS_MONTE_CARLO).contains(&self.max_pairs_per_pass) {
            return Err(Error::OutOfRange {
                name: "max_pairs_per_pass",
                value: self.max_pairs_per_pass as f64,
                range: "[1, 3]",
            });
        }
        Ok(())
    }

    /// Probability of emitting `n` pairs, `n = 0..=max_pairs_per_pass`.
    pub fn pair_distribution(&self, pass: u8) -> Vec<f64> {
        let mean = if pass == 1 {
            self.mean_pairs_pass1
        } else {
            self.mean_pairs_pass2
        };
        match self.emission_statistics {
            EmissionStatistics::PoissonTruncated => {
                truncated_poisson(mean, self.max_pairs_per_pass)
            }
        }
    }
}

pub fn truncated_poisson(mean: f64, max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(max + 1);
    let mut term = 1.0;
    for n in 0..=max {
        if n > 0 {
            term *= mean / n as f64;
        }
        w.push(term);
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreparationConfig {
    /// Polarizer setting written onto photon 1.
    pub chi: PolarizationSpec,
}

impl Default for PreparationConfig {
    fn default() -> Self {
        Self {
            chi: PolarizationSpec::Diagonal,
        }
    }
}

/// Detection efficiencies. Detectors are threshold (non-number-resolving)
/// and have no dark counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub f1: f64,
    pub f2: f64,
    pub d1: f64,
    pub d2: f64,
    pub p: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

impl DetectorConfig {
    pub fn uniform(eta: f64) -> Self {
        Self {
            f1: eta,
            f2: eta,
            d1: eta,
            d2: eta,
            p: eta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, e) in [
            ("f1", self.f1),
            ("f2", self.f2),
            ("d1", self.d1),
            ("d2", self.d2),
            ("p", self.p),
        ] {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::OutOfRange {
                    name,
                    value: e,
                    range: "(0, 1]",
                });
            }
        }
        Ok(())
    }
}

/// Bob's polarizing beam splitter: d2 sees the transmitted state, d1 the
/// reflected orthogonal one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisBasis {
    pub d2: PolarizationSpec,
    pub d1: PolarizationSpec,
}

impl AnalysisBasis {
    /// `d2` along `chi`, `d1` orthogonal.
    pub fn aligned_with(chi: PolarizationSpec) -> Self {
        Self {
            d2: chi,
            d1: chi.orthogonal(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum VisibilityFormula {
    /// `(plateau - dip) / (plateau + dip)`
    #[default]
    PlateauDip,
    /// `(max - min) / (max + min)` over the scan.
    MaxMin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: SourceConfig,
    pub prep: PreparationConfig,
    pub detectors: DetectorConfig,
    pub overlap_model: ModeOverlapModel,
    pub delays_fs: Vec<f64>,
    pub pulses_per_delay: u64,
    pub seed: u64,
    pub block_photon1_path: bool,
    /// Defaults to the basis aligned with the prepared polarization.
    pub analysis_basis: Option<AnalysisBasis>,
    pub visibility_formula: VisibilityFormula,
}

/// `-1500, -1200, …, 1500` fs.
pub fn default_delays() -> Vec<f64> {
    (-5..=5).map(|k| 300.0 * k as f64).collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source: SourceConfig::default(),
            prep: PreparationConfig::default(),
            detectors: DetectorConfig::default(),
            overlap_model: ModeOverlapModel::default(),
            delays_fs: default_delays(),
            pulses_per_delay: 1_000_000,
            seed: 1,
            block_photon1_path: false,
            analysis_basis: None,
            visibility_formula: VisibilityFormula::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn analysis(&self) -> AnalysisBasis {
        self.analysis_basis
            .unwrap_or_else(|| AnalysisBasis::aligned_with(self.prep.chi))
    }

    pub fn with_chi(&self, chi: PolarizationSpec) -> Self {
        let mut c = self.clone();
        c.prep.chi = chi;
        c
    }

    pub fn blocked(&self) -> Self {
        let mut c = self.clone();
        c.block_photon1_path = true;
        c
    }

    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.detectors.validate()?;
        self.overlap_model.validate()?;
        if self.delays_fs.is_empty() {
            return Err(Error::InvalidConfig("delays must be nonempty".into()));
        }
        if self.delays_fs.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidConfig("delays must be finite".into()));
        }
        if self.pulses_per_delay == 0 {
            return Err(Error::InvalidConfig(
                "pulses_per_delay must be at least 1".into(),
            ));
        }
        let basis = self.analysis();
        let overlap = basis
            .d1
            .state::<f64>()
            .inner(&basis.d2.state())
            .expect("single photons")
            .norm();
        if overlap > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "analysis states {} and {} are not orthogonal",
                basis.d2, basis.d1
            )));
        }
        Ok(())
    }

    /// Probability per pulse that exactly one pair comes from each pass and
    /// photon 1 passes the polarizer: the normalization of the ideal
    /// three-fold probabilities.
    pub fn signal_probability(&self) -> f64 {
        let p1 = self.source.pair_distribution(1);
        let p2 = self.source.pair_distribution(2);
        p1[1] * p2[1] * 0.5
    }
}
