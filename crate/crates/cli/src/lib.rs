// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the qdbell simulator.
//!
//! Settings come from three layers: built-in defaults, an optional
//! `key = value` file, and flags. [`run`] executes a resolved
//! [`RunConfig`] and returns a [`Table`] whose CSV rendering is
//! byte-for-byte deterministic.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod config;
pub mod error;
pub mod scenario;

pub use args::{parse_args, Cli};
pub use config::{EnergyMode, Overrides, RunConfig, Scenario, Units};
pub use error::CliError;
pub use scenario::{model_params, run, Cell, Table};

use std::io::Write;

/// Run `cfg` and write the CSV to `cfg.out` or standard output. Returns
/// the warnings for the caller to report.
pub fn execute(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let table = run(cfg)?;
    let csv = table.to_csv();
    match &cfg.out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(table.warnings)
}
