use crate::error::{Error, Result};
use crate::experiment::analysis::{visibility, Channel};
use crate::experiment::analytic::{analytic_rates_at_overlap, analytic_scan};
use crate::experiment::config::{ExperimentConfig, SourceConfig};
use crate::experiment::scan::{plateau_threshold, run_delay};

/// Pass-2 mean held fixed while the spurious calibration solves for pass 1.
pub const REFERENCE_MEAN_PASS2: f64 = 0.05;

/// Largest mean pair number the solvers may use.
pub const MAX_MEAN_PAIRS: f64 = 0.5;

const BISECTION_STEPS: usize = 80;

/// Share of three-fold coincidences that survive blocking photon 1, taken
/// away from the interference region (`v = 0`).
pub fn spurious_fraction(config: &ExperimentConfig) -> Result<f64> {
    let open = analytic_rates_at_overlap(
        &ExperimentConfig {
            block_photon1_path: false,
            ..config.clone()
        },
        0.0,
    )?;
    let blocked = analytic_rates_at_overlap(&config.blocked(), 0.0)?;
    let total = open.d1f1f2 + open.d2f1f2;
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok((blocked.d1f1f2 + blocked.d2f1f2) / total)
}

/// Monte Carlo estimate of [`spurious_fraction`] with its standard error:
/// `pulses` pulses each for the open and the blocked path, far outside the
/// interference region. The blocked run uses seed `seed + 1`.
pub fn measure_spurious_fraction(config: &ExperimentConfig, pulses: u64) -> Result<(f64, f64)> {
    config.validate()?;
    let far = 100.0 * plateau_threshold(config);
    let mut open_cfg = config.clone();
    open_cfg.block_photon1_path = false;
    let mut blocked_cfg = config.blocked();
    blocked_cfg.seed = config.seed.wrapping_add(1);
    let open = run_delay(&open_cfg, far, 0, pulses);
    let blocked = run_delay(&blocked_cfg, far, 0, pulses);
    let n_open = (open.d1f1f2 + open.d2f1f2) as f64;
    let n_blocked = (blocked.d1f1f2 + blocked.d2f1f2) as f64;
    if n_open == 0.0 {
        return Err(Error::InsufficientScan(
            "no three-fold coincidences on the open path".into(),
        ));
    }
    let r = n_blocked / n_open;
    let sigma = if n_blocked > 0.0 {
        r * (1.0 / n_blocked + 1.0 / n_open).sqrt()
    } else {
        0.0
    };
    Ok((r, sigma))
}

fn bisect(mut lo: f64, mut hi: f64, target: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Source means giving the target spurious fraction with the default detectors.
pub fn calibrate_spurious(target: f64) -> Result<SourceConfig> {
    calibrate_spurious_for(target, &ExperimentConfig::default())
}

/// Solve for `mean_pairs_pass1` at `mean_pairs_pass2 = REFERENCE_MEAN_PASS2`
/// using the detectors of `base`. The fraction rises monotonically with the
/// pass-1 mean.
pub fn calibrate_spurious_for(target: f64, base: &ExperimentConfig) -> Result<SourceConfig> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::NoSolution(format!(
            "spurious fraction {target} is outside (0, 1)"
        )));
    }
    let mut cfg = base.clone();
    cfg.source = SourceConfig {
        mean_pairs_pass1: MAX_MEAN_PAIRS,
        mean_pairs_pass2: REFERENCE_MEAN_PASS2,
        max_pairs_per_pass: 2,
        ..base.source
    };
    let with_mean = |m: f64| {
        let mut c = cfg.clone();
        c.source.mean_pairs_pass1 = m;
        spurious_fraction(&c)
    };
    let reachable = with_mean(MAX_MEAN_PAIRS)?;
    if reachable < target {
        return Err(Error::NoSolution(format!(
            "spurious fraction {target} needs mean_pairs_pass1 > {MAX_MEAN_PAIRS} (reaches {reachable:.4})"
        )));
    }
    let m = bisect(0.0, MAX_MEAN_PAIRS, target, with_mean)?;
    Ok(SourceConfig {
        mean_pairs_pass1: m,
        ..cfg.source
    })
}

/// Exact four-fold orthogonal-channel visibility on the configured delays.
pub fn fourfold_visibility(config: &ExperimentConfig) -> Result<f64> {
    Ok(visibility(&analytic_scan(config)?, Channel::FourfoldD1)?.value)
}

/// Peak overlap `v_max` giving the target four-fold orthogonal-channel
/// visibility for `config`, which must contain a zero delay and plateau delays.
pub fn calibrate_fourfold_visibility(target: f64, config: &ExperimentConfig) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::NoSolution(format!(
            "visibility {target} is outside (0, 1)"
        )));
    }
    let with_vmax = |v: f64| {
        let mut c = config.clone();
        c.overlap_model.v_max = v;
        fourfold_visibility(&c)
    };
    let best = with_vmax(1.0)?;
    if best < target {
        return Err(Error::NoSolution(format!(
            "visibility {target} exceeds the maximum {best:.4} of this source"
        )));
    }
    bisect(0.0, 1.0, target, with_vmax)
}
