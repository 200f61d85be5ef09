//! Layered configuration: built-in defaults, then a preset, then a TOML
//! file, then command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use teleport_core::experiment::{ExperimentConfig, Preset};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "TELEPORTSIM_SEED";

/// On-disk scan configuration. Every key under `[experiment]` is optional
/// and overrides the preset or default value of the same path.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub preset: Option<Preset>,
    pub subtract_background: Option<bool>,
    #[serde(default)]
    pub experiment: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let file: ConfigFile = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                file.schema_version
            )));
        }
        Ok(file)
    }
}

/// Values given on the command line; `None` leaves the lower layer in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub seed: Option<u64>,
    pub pulses: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub preset: Option<Preset>,
    pub subtract_background: bool,
}

fn merge(base: &mut toml::Table, over: &toml::Table) {
    for (k, v) in over {
        match (base.get_mut(k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            _ => {
                base.insert(k.clone(), v.clone());
            }
        }
    }
}

pub fn overlay(base: &ExperimentConfig, over: &toml::Table) -> Result<ExperimentConfig, CliError> {
    let mut table = toml::Table::try_from(base).map_err(|e| CliError::Config(e.to_string()))?;
    merge(&mut table, over);
    table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(format!("[experiment]: {e}")))
}

pub fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{SEED_ENV}={s} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<Resolved, CliError> {
    let preset = flags.preset.or(file.and_then(|f| f.preset));
    let mut config = match preset {
        Some(p) => p.config()?,
        None => ExperimentConfig::default(),
    };
    let mut seed_set = false;
    if let Some(f) = file {
        config = overlay(&config, &f.experiment)?;
        seed_set = f.experiment.contains_key("seed");
    }
    match flags.seed {
        Some(s) => config.seed = s,
        None if !seed_set => {
            if let Some(s) = env_seed()? {
                config.seed = s;
            }
        }
        None => {}
    }
    if let Some(p) = flags.pulses {
        config.pulses_per_delay = p;
    }
    check_seed(config.seed)?;
    config.validate()?;
    let subtract_background = file
        .and_then(|f| f.subtract_background)
        .unwrap_or_else(|| preset.is_some_and(|p| p.subtracts_background()));
    Ok(Resolved {
        config,
        preset,
        subtract_background,
    })
}

/// TOML integers are signed 64-bit, so manifests cannot hold larger seeds.
pub fn check_seed(seed: u64) -> Result<(), CliError> {
    if seed > i64::MAX as u64 {
        return Err(CliError::Config(format!(
            "seed {seed} exceeds {}",
            i64::MAX
        )));
    }
    Ok(())
}
