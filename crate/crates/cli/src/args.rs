// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{EnergyMode, Overrides, RunConfig, Scenario, Units};
use crate::error::CliError;

/// Dressed-state Bell-pair preparation in coupled quantum dots.
///
/// Physical inputs are angular frequencies in rad/s. Flags override the
/// config file, which overrides the built-in defaults.
#[derive(Clone, Debug, Parser)]
#[command(name = "qdbell", version)]
pub struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    pub scenario: Option<Scenario>,
    /// Coherent-state amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Laser frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Interdot interaction.
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Drive amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Pure-dephasing rate.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Band gap, used by the resonant and bandgap energy modes.
    #[arg(long, allow_negative_numbers = true)]
    pub e: Option<f64>,
    /// Source of the bare exciton energies.
    #[arg(long, value_enum)]
    pub energies: Option<EnergyMode>,
    #[arg(long, allow_negative_numbers = true)]
    pub e0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e2: Option<f64>,
    /// Photon sector for bell, pulse and decohere.
    #[arg(long)]
    pub n: Option<usize>,
    /// Fock-space truncation.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Final time (pulse: end of the search window).
    #[arg(long, allow_negative_numbers = true)]
    pub tmax: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time and energy units for `tmax` and the output.
    #[arg(long, value_enum)]
    pub units: Option<Units>,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            scenario: self.scenario,
            alpha: self.alpha,
            omega: self.omega,
            w: self.w,
            a: self.a,
            gamma: self.gamma,
            e: self.e,
            energies: self.energies,
            e0: self.e0,
            e1: self.e1,
            e2: self.e2,
            n: self.n,
            nmax: self.nmax,
            tmax: self.tmax,
            steps: self.steps,
            out: self.out.clone(),
            units: self.units,
        }
    }

    /// Layer the flags over the (already read) config file text.
    pub fn resolve_with(&self, config_text: Option<&str>) -> Result<RunConfig, CliError> {
        let file = config_text.map(Overrides::parse).transpose()?.unwrap_or_default();
        RunConfig::resolve(file.merged(self.overrides()))
    }

    /// Read `--config` if given and resolve.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let text = match &self.config {
            Some(path) => Some(
                std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
            ),
            None => None,
        };
        self.resolve_with(text.as_deref())
    }
}

/// Parse an argument vector (including the program name) without touching
/// the file system.
pub fn parse_args<I, T>(args: I, config_text: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    cli.resolve_with(config_text)
}
