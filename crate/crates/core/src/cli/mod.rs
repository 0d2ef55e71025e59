// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, orchestration and result files for the `predsieve`
//! binary.

mod config;
mod output;
mod run;

use std::path::Path;

pub use config::{
    load_config, parse_config, AverageSection, ConfigError, CpCheckSection, CpGenerator, Experiment, FockSection,
    GridSection, IntegratorSection, ModelKind, ModelSection, OscillatorSection, Plan, RunConfig, SieveSection,
    StateSection,
};
pub use output::{emit_plotdata, num, Table};
pub use run::{run, RunError, RunReport};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const DEGRADED: u8 = 3;
    pub const IO: u8 = 4;
}

/// Load `config`, run `experiment` and write into `out`. Returns the exit
/// code; diagnostics go to the log.
pub fn execute(experiment: Experiment, config: &Path, out: &Path, strict: bool) -> u8 {
    let text = match std::fs::read_to_string(config) {
        Ok(t) => t,
        Err(e) => {
            log::error!("cannot read {}: {e}", config.display());
            return exit::IO;
        }
    };
    let resolved = match parse_config(&text).and_then(|c| c.resolve(Some(experiment))) {
        Ok(c) => c,
        Err(e) => {
            log::error!("{}: {e}", config.display());
            return exit::CONFIG;
        }
    };
    match run(&resolved, out) {
        Ok(report) => {
            println!("{experiment}: {}", report.summary);
            for w in &report.warnings {
                log::warn!("{w}");
            }
            if strict && report.degraded {
                log::error!("run is numerically degraded");
                exit::DEGRADED
            } else {
                exit::SUCCESS
            }
        }
        Err(RunError::Io(e)) => {
            log::error!("I/O error: {e}");
            exit::IO
        }
        Err(e) => {
            log::error!("{e}");
            exit::CONFIG
        }
    }
}
