//! Named scenarios and the runner that turns one into scans and a visibility summary.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::analysis::{subtract_background, visibility_with, Channel, Visibility};
use crate::experiment::calibrate::{calibrate_fourfold_visibility, calibrate_spurious_for};
use crate::experiment::config::{ExperimentConfig, SourceConfig};
use crate::experiment::scan::{run_scan, ScanResult};
use crate::polarization::PolarizationSpec;

pub const CALIBRATED_SPURIOUS_FRACTION: f64 = 0.68;
pub const CALIBRATED_FOURFOLD_VISIBILITY: f64 = 0.70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Fig3Ideal,
    Fig4Spurious,
    Fig5Fourfold,
    Table1,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Fig3Ideal,
        Preset::Fig4Spurious,
        Preset::Fig5Fourfold,
        Preset::Table1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig3Ideal => "fig3-ideal",
            Preset::Fig4Spurious => "fig4-spurious",
            Preset::Fig5Fourfold => "fig5-fourfold",
            Preset::Table1 => "table1",
        }
    }

    /// Polarizations prepared on photon 1, one scan each.
    pub fn polarizations(&self) -> Vec<PolarizationSpec> {
        match self {
            Preset::Fig3Ideal | Preset::Fig4Spurious => vec![PolarizationSpec::Diagonal],
            Preset::Fig5Fourfold => vec![PolarizationSpec::Diagonal, PolarizationSpec::Vertical],
            Preset::Table1 => PolarizationSpec::TABLE.to_vec(),
        }
    }

    /// Whether each scan is paired with a blocked-path run for background subtraction.
    pub fn subtracts_background(&self) -> bool {
        matches!(self, Preset::Fig4Spurious | Preset::Table1)
    }

    pub fn summary_channels(&self) -> Vec<Channel> {
        match self {
            Preset::Fig3Ideal | Preset::Fig4Spurious => vec![Channel::D1F1F2, Channel::D2F1F2],
            Preset::Fig5Fourfold => vec![Channel::FourfoldD1, Channel::FourfoldD2],
            Preset::Table1 => vec![Channel::D1F1F2],
        }
    }

    /// Fully resolved configuration, including calibrated source and overlap.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut c = match self {
            Preset::Fig3Ideal => ideal_config(),
            Preset::Fig4Spurious => spurious_config()?,
            Preset::Fig5Fourfold | Preset::Table1 => degraded_config()?,
        };
        c.pulses_per_delay = match self {
            Preset::Fig3Ideal | Preset::Fig4Spurious => 1_000_000,
            Preset::Fig5Fourfold => 12_000_000,
            Preset::Table1 => 2_000_000,
        };
        Ok(c)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset '{s}'")))
    }
}

/// At most one pair per pass at the largest allowed mean, prepared at +45°.
pub fn ideal_config() -> ExperimentConfig {
    ExperimentConfig {
        source: SourceConfig {
            mean_pairs_pass1: 0.5,
            mean_pairs_pass2: 0.5,
            max_pairs_per_pass: 1,
            ..Default::default()
        },
        ..ExperimentConfig::default().with_chi(PolarizationSpec::Diagonal)
    }
}

/// Double pairs enabled, source means calibrated to the reference spurious fraction.
pub fn spurious_config() -> Result<ExperimentConfig> {
    let base = ExperimentConfig::default().with_chi(PolarizationSpec::Diagonal);
    let source = calibrate_spurious_for(CALIBRATED_SPURIOUS_FRACTION, &base)?;
    Ok(ExperimentConfig { source, ..base })
}

/// [`spurious_config`] with `v_max` calibrated to the reference four-fold visibility.
pub fn degraded_config() -> Result<ExperimentConfig> {
    let mut c = spurious_config()?;
    c.overlap_model.v_max = calibrate_fourfold_visibility(CALIBRATED_FOURFOLD_VISIBILITY, &c)?;
    Ok(c)
}

/// All four-fold channels are tallied by every scan; this names the intent.
pub fn fourfold_scan(config: &ExperimentConfig) -> Result<ScanResult> {
    run_scan(config)
}

/// One polarization of a preset run.
#[derive(Debug, Clone)]
pub struct PolarizationRun {
    pub chi: PolarizationSpec,
    pub config: ExperimentConfig,
    /// Raw scan, background-corrected when a blocked run exists.
    pub scan: ScanResult,
    pub blocked: Option<ScanResult>,
    pub visibilities: Vec<(Channel, Visibility)>,
}

impl PolarizationRun {
    pub fn visibility(&self, channel: Channel) -> Option<Visibility> {
        self.visibilities
            .iter()
            .find(|(c, _)| *c == channel)
            .map(|(_, v)| *v)
    }

    /// File stem for this run's CSV output.
    pub fn label(&self) -> String {
        format!("chi_{}", self.chi.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub polarization: String,
    pub channel: Channel,
    pub visibility: f64,
    pub sigma: f64,
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Scan one polarization, optionally against a blocked-path run with seed `seed + 1`.
pub fn run_polarization(
    config: &ExperimentConfig,
    subtract: bool,
    channels: &[Channel],
) -> Result<PolarizationRun> {
    let raw = run_scan(config)?;
    let (scan, blocked) = if subtract {
        let mut b = config.blocked();
        b.seed = config.seed.wrapping_add(1);
        let blocked = run_scan(&b)?;
        (subtract_background(&raw, &blocked)?, Some(blocked))
    } else {
        (raw, None)
    };
    let visibilities = channels
        .iter()
        .map(|&ch| Ok((ch, visibility_with(&scan, ch, config.visibility_formula)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolarizationRun {
        chi: config.prep.chi,
        config: config.clone(),
        scan,
        blocked,
        visibilities,
    })
}

/// Run every polarization of `preset` on `base`. All polarizations share
/// the seed of `base`.
pub fn run_preset(
    preset: Preset,
    base: &ExperimentConfig,
) -> Result<(Vec<PolarizationRun>, Vec<SummaryRow>)> {
    let channels = preset.summary_channels();
    let runs = preset
        .polarizations()
        .into_iter()
        .map(|chi| {
            run_polarization(
                &base.with_chi(chi),
                preset.subtracts_background(),
                &channels,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = runs
        .iter()
        .flat_map(|r| {
            r.visibilities.iter().map(|(ch, v)| SummaryRow {
                polarization: r.chi.to_string(),
                channel: *ch,
                visibility: v.value,
                sigma: v.sigma,
            })
        })
        .collect();
    Ok((runs, summary))
}
