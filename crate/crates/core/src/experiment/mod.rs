//! The pulsed two-pass down-conversion experiment.
//!
//! [`run_scan`] samples pulses with [`PulseSampler`]; [`analytic_rates`]
//! computes the same model exactly and is the reference the sampler is tested
//! against.

mod analysis;
mod analytic;
mod calibrate;
mod config;
mod presets;
mod pulse;
mod scan;
mod tally;

pub use analysis::{subtract_background, visibility, visibility_with, Channel, Visibility};
pub use analytic::{analytic_rates, analytic_rates_at_overlap, analytic_scan, MAX_PAIRS_ANALYTIC};
pub use calibrate::{
    calibrate_fourfold_visibility, calibrate_spurious, calibrate_spurious_for, fourfold_visibility,
    measure_spurious_fraction, spurious_fraction, MAX_MEAN_PAIRS, REFERENCE_MEAN_PASS2,
};
pub use config::{
    default_delays, truncated_poisson, AnalysisBasis, DetectorConfig, EmissionStatistics,
    ExperimentConfig, PreparationConfig, SourceConfig, VisibilityFormula, MAX_PAIRS_MONTE_CARLO,
};
pub use presets::{
    degraded_config, fourfold_scan, ideal_config, run_polarization, run_preset, spurious_config,
    write_summary_csv, PolarizationRun, Preset, SummaryRow, CALIBRATED_FOURFOLD_VISIBILITY,
    CALIBRATED_SPURIOUS_FRACTION,
};
pub use pulse::{simulate_pulse, ClickSet, PhotonCounts, PulseSampler};
pub use scan::{
    plateau_threshold, run_delay, run_scan, run_scan_threaded, ScanResult, ScanRow, PLATEAU_SCALES,
};
pub use tally::{CoincidenceRates, CoincidenceTally};
