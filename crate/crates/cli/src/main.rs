// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use qdbell_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.resolve().and_then(|cfg| execute(&cfg));
    match result {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qdbell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
