//! Command-line front end: configuration, pipelines and file formats.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

use std::path::Path;

pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    Sweep,
    Plot,
}

/// Loads `config` and runs `command`, mapping every outcome to an exit code.
pub fn run(command: Command, config: &Path) -> i32 {
    let result = RunConfig::load(config).and_then(|cfg| match command {
        Command::Solve => commands::run_solve(&cfg),
        Command::Verify => commands::run_verify(&cfg),
        Command::Sweep => commands::run_sweep(&cfg),
        Command::Plot => commands::run_plot(&cfg),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
