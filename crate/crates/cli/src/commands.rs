use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use teleport_core::experiment::{
    calibrate_fourfold_visibility, calibrate_spurious, measure_spurious_fraction, run_polarization,
    run_scan, spurious_config, spurious_fraction, visibility, write_summary_csv, Channel,
    ExperimentConfig, PolarizationRun, Preset, SourceConfig, SummaryRow, REFERENCE_MEAN_PASS2,
};
use teleport_core::polarization::{fidelity, BellOutcome, PolarizationSpec};
use teleport_core::teleport::{teleport, teleport_postselected};

use crate::config::{
    check_seed, env_seed, resolve, ConfigFile, Overrides, Resolved, SCHEMA_VERSION,
};
use crate::error::CliError;
use crate::manifest::{RunManifest, MANIFEST_FILE};

pub fn teleport_cmd(
    state: &str,
    trials: u64,
    seed: Option<u64>,
    postselect: bool,
) -> Result<String, CliError> {
    let spec: PolarizationSpec = state.parse()?;
    if trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let seed = match seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    let target = spec.state::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    writeln!(out, "state: {spec}").unwrap();
    writeln!(out, "trials: {trials}").unwrap();
    writeln!(out, "seed: {seed}").unwrap();
    if postselect {
        let (mut kept, mut fid) = (0u64, 0.0);
        for _ in 0..trials {
            if let Some(rho) = teleport_postselected::<f64, _>(&spec, &mut rng) {
                kept += 1;
                fid += fidelity(&rho, &target)?;
            }
        }
        writeln!(
            out,
            "postselected: {kept} ({:.6})",
            kept as f64 / trials as f64
        )
        .unwrap();
        let mean = if kept > 0 {
            fid / kept as f64
        } else {
            f64::NAN
        };
        writeln!(out, "mean fidelity: {mean:.12}").unwrap();
    } else {
        let mut counts = [0u64; 4];
        let mut fid = 0.0;
        for _ in 0..trials {
            let t = teleport::<f64, _>(&spec, &mut rng);
            counts[t.outcome.index()] += 1;
            fid += fidelity(&t.state, &target)?;
        }
        writeln!(out, "outcome count frequency").unwrap();
        for b in BellOutcome::ALL {
            let n = counts[b.index()];
            writeln!(out, "{b} {n} {:.6}", n as f64 / trials as f64).unwrap();
        }
        writeln!(out, "mean fidelity: {:.12}", fid / trials as f64).unwrap();
    }
    Ok(out)
}

pub struct ScanArgs {
    pub config: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub overrides: Overrides,
    pub out: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Run the scans for a resolved configuration and write CSVs, a summary and
/// the manifest into `out`. Returns a human-readable report.
fn execute(resolved: &Resolved, out: &Path) -> Result<String, CliError> {
    let (chis, channels) = match resolved.preset {
        Some(p) => (p.polarizations(), p.summary_channels()),
        None => (vec![resolved.config.prep.chi], Channel::ALL.to_vec()),
    };
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut runs: Vec<PolarizationRun> = Vec::new();
    for chi in chis {
        runs.push(run_polarization(
            &resolved.config.with_chi(chi),
            resolved.subtract_background,
            &channels,
        )?);
    }
    let mut outputs = Vec::new();
    let mut summary = Vec::new();
    let mut report = String::new();
    for r in &runs {
        let name = format!("{}.csv", r.label());
        r.scan.save_csv(out.join(&name))?;
        outputs.push(name);
        if let Some(b) = &r.blocked {
            let name = format!("{}_blocked.csv", r.label());
            b.save_csv(out.join(&name))?;
            outputs.push(name);
        }
        for (ch, v) in &r.visibilities {
            writeln!(
                report,
                "{} {ch}: V = {:.4} ± {:.4}",
                r.chi, v.value, v.sigma
            )
            .unwrap();
            summary.push(SummaryRow {
                polarization: r.chi.to_string(),
                channel: *ch,
                visibility: v.value,
                sigma: v.sigma,
            });
        }
    }
    let summary_path = out.join("summary.csv");
    let file = fs::File::create(&summary_path).map_err(|e| io_err(&summary_path, e))?;
    write_summary_csv(&summary, std::io::BufWriter::new(file))?;
    outputs.push("summary.csv".into());
    let manifest = RunManifest::new(
        resolved.preset,
        resolved.subtract_background,
        resolved.config.clone(),
        outputs,
    );
    manifest.save(&out.join(MANIFEST_FILE))?;
    writeln!(
        report,
        "wrote {} files to {}",
        manifest.outputs.len() + 1,
        out.display()
    )
    .unwrap();
    Ok(report)
}

pub fn scan_cmd(args: &ScanArgs) -> Result<String, CliError> {
    let resolved = if let Some(m) = &args.manifest {
        let m = RunManifest::load(m)?;
        Resolved {
            config: m.config,
            preset: m.preset,
            subtract_background: m.subtract_background,
        }
    } else {
        if args.config.is_none() && args.overrides.preset.is_none() {
            return Err(CliError::Config(
                "scan needs --config, --preset or --manifest".into(),
            ));
        }
        let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
        resolve(file.as_ref(), &args.overrides)?
    };
    execute(&resolved, &args.out)
}

#[derive(Serialize)]
struct Fragment<'a> {
    schema_version: u32,
    experiment: FragmentExperiment<'a>,
}

#[derive(Serialize)]
struct FragmentExperiment<'a> {
    source: &'a SourceConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlap_model: Option<VmaxOnly>,
}

#[derive(Serialize)]
struct VmaxOnly {
    v_max: f64,
}

fn fragment(source: &SourceConfig, v_max: Option<f64>) -> Result<String, CliError> {
    let f = Fragment {
        schema_version: SCHEMA_VERSION,
        experiment: FragmentExperiment {
            source,
            overlap_model: v_max.map(|v_max| VmaxOnly { v_max }),
        },
    };
    toml::to_string(&f).map_err(|e| CliError::Config(e.to_string()))
}

pub struct CalibrateArgs {
    pub spurious_target: Option<f64>,
    pub fourfold_visibility: Option<f64>,
    pub verify_pulses: Option<u64>,
    pub seed: Option<u64>,
}

pub fn calibrate_cmd(args: &CalibrateArgs) -> Result<String, CliError> {
    let seed = match args.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(1),
    };
    check_seed(seed)?;
    let mut out = String::new();
    match (args.spurious_target, args.fourfold_visibility) {
        (Some(target), None) => {
            let source = calibrate_spurious(target)?;
            let cfg = ExperimentConfig {
                source,
                seed,
                ..ExperimentConfig::default()
            };
            writeln!(
                out,
                "# spurious fraction {:.6} with mean_pairs_pass2 fixed at {REFERENCE_MEAN_PASS2}",
                spurious_fraction(&cfg)?
            )
            .unwrap();
            if let Some(n) = args.verify_pulses {
                let (f, s) = measure_spurious_fraction(&cfg, n)?;
                writeln!(
                    out,
                    "# monte carlo check ({n} pulses per path, seed {seed}): {f:.4} ± {s:.4}"
                )
                .unwrap();
            }
            out.push_str(&fragment(&source, None)?);
        }
        (None, Some(target)) => {
            let mut cfg = spurious_config()?;
            cfg.seed = seed;
            let v_max = calibrate_fourfold_visibility(target, &cfg)?;
            cfg.overlap_model.v_max = v_max;
            writeln!(out, "# four-fold orthogonal-channel visibility {target} on the calibrated spurious source").unwrap();
            if let Some(n) = args.verify_pulses {
                cfg.pulses_per_delay = n;
                let v = visibility(&run_scan(&cfg)?, Channel::FourfoldD1)?;
                writeln!(
                    out,
                    "# monte carlo check ({n} pulses per delay, seed {seed}): {:.4} ± {:.4}",
                    v.value, v.sigma
                )
                .unwrap();
            }
            out.push_str(&fragment(&cfg.source, Some(v_max))?);
        }
        _ => {
            return Err(CliError::Config(
                "give exactly one of --spurious-target or --fourfold-visibility".into(),
            ))
        }
    }
    Ok(out)
}

pub fn preset_names() -> String {
    Preset::ALL
        .iter()
        .map(|p| p.name())
        .collect::<Vec<_>>()
        .join(", ")
}
