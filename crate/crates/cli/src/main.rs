//! `teleportsim`: run the ideal protocol, delay scans and source calibration.

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use teleport_core::experiment::Preset;

use crate::commands::{
    calibrate_cmd, preset_names, scan_cmd, teleport_cmd, CalibrateArgs, ScanArgs,
};
use crate::config::Overrides;
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "teleportsim",
    version,
    about = "Photonic teleportation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Teleport a polarization state with the ideal protocol and report outcome statistics.
    Teleport {
        /// H, V, +45, -45, R, L, an angle, or "alpha,beta" amplitudes.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Falls back to TELEPORTSIM_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Keep only the outcome that needs no correction.
        #[arg(long)]
        postselect: bool,
    },
    /// Run a delay scan from a preset, a config file or a manifest.
    Scan {
        #[arg(long, conflicts_with = "manifest")]
        config: Option<PathBuf>,
        /// fig3-ideal, fig4-spurious, fig5-fourfold or table1.
        #[arg(long, conflicts_with = "manifest")]
        preset: Option<String>,
        /// Replay a previous run exactly.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, conflicts_with = "manifest")]
        seed: Option<u64>,
        /// Pulses per delay.
        #[arg(long, conflicts_with = "manifest")]
        pulses: Option<u64>,
    },
    /// Solve for source means or peak overlap and print a config fragment.
    Calibrate {
        #[arg(
            long,
            conflicts_with = "fourfold_visibility",
            required_unless_present = "fourfold_visibility"
        )]
        spurious_target: Option<f64>,
        #[arg(long)]
        fourfold_visibility: Option<f64>,
        /// Also check the result with a Monte Carlo run of this many pulses.
        #[arg(long)]
        verify_pulses: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Teleport {
            state,
            trials,
            seed,
            postselect,
        } => teleport_cmd(&state, trials, seed, postselect),
        Command::Scan {
            config,
            preset,
            manifest,
            out,
            seed,
            pulses,
        } => {
            let preset = preset
                .map(|p| {
                    p.parse::<Preset>().map_err(|_| {
                        CliError::Config(format!(
                            "unknown preset '{p}' (expected one of {})",
                            preset_names()
                        ))
                    })
                })
                .transpose()?;
            scan_cmd(&ScanArgs {
                config,
                manifest,
                overrides: Overrides {
                    preset,
                    seed,
                    pulses,
                },
                out,
            })
        }
        Command::Calibrate {
            spurious_target,
            fourfold_visibility,
            verify_pulses,
            seed,
        } => calibrate_cmd(&CalibrateArgs {
            spurious_target,
            fourfold_visibility,
            verify_pulses,
            seed,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("teleportsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
