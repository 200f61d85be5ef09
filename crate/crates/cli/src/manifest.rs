use std::path::Path;

use serde::{Deserialize, Serialize};
use teleport_core::experiment::{ExperimentConfig, Preset};

use crate::config::SCHEMA_VERSION;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.toml";

/// Written next to every scan output. Replaying it reproduces the outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub preset: Option<Preset>,
    pub subtract_background: bool,
    pub seed: u64,
    /// Paths relative to the manifest.
    pub outputs: Vec<String>,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(
        preset: Option<Preset>,
        subtract_background: bool,
        config: ExperimentConfig,
        outputs: Vec<String>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "scan".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            preset,
            subtract_background,
            seed: config.seed,
            outputs,
            config,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let m: RunManifest = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "{}: unsupported schema_version {}",
                path.display(),
                m.schema_version
            )));
        }
        if m.seed != m.config.seed {
            return Err(CliError::Config(format!(
                "{}: seed does not match config.seed",
                path.display()
            )));
        }
        m.config.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}
