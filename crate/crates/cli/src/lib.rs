//! Command-line driver: worldline tracks, balance reports and current checks
//! for the built-in scenarios.

pub mod commands;
pub mod config;
pub mod output;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub use commands::{cmd_balance, cmd_currents, cmd_worldlines, INTEGRAL_TOLERANCE};
pub use config::{Overrides, RunConfig};

use formflux_core::scenarios::SCENARIO_NAMES;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "formflux", version, about = "Flux, source and worldline checks for growing bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace worldlines from the seeds; write CSV tracks and an SVG plot
    Worldlines(Overrides),
    /// Pointwise, spacetime and region balance residuals as JSON
    Balance(Overrides),
    /// Check the singular balance law against seeded bump probes
    Currents(Overrides),
    /// List scenario names
    Scenarios,
}

/// Runs a parsed command and returns the process exit code. Errors are
/// reported by the caller and map to [`EXIT_CONFIG`].
pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Worldlines(o) => {
            let cfg = RunConfig::resolve(o)?;
            let out = cmd_worldlines(&cfg)?;
            for t in &out.tracks {
                let dev = t
                    .closed_form_deviation
                    .map(|d| format!(" closed-form gap {d:.3e}"))
                    .unwrap_or_default();
                println!("seed {:?}: {} points, {:?}{dev}", t.seed, t.points, t.status);
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            Ok(EXIT_PASS)
        }
        Command::Balance(o) => {
            let cfg = RunConfig::resolve(o)?;
            let out = cmd_balance(&cfg)?;
            print!("{}", out.json);
            Ok(if out.report.passed { EXIT_PASS } else { EXIT_TOLERANCE })
        }
        Command::Currents(o) => {
            let cfg = RunConfig::resolve(o)?;
            let out = cmd_currents(&cfg)?;
            print!("{}", out.json);
            Ok(if out.report.passed { EXIT_PASS } else { EXIT_TOLERANCE })
        }
        Command::Scenarios => {
            for name in SCENARIO_NAMES {
                println!("{name}");
            }
            Ok(EXIT_PASS)
        }
    }
}
