use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ewmt_cli::{run, Command};

/// Rotational elliptic Weingarten surfaces of minimal type in R^2 x_h R.
#[derive(Parser)]
#[command(name = "ewmt", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the profile; write CSV and report.
    Solve { config: PathBuf },
    /// Integrate and check every invariant; exit 1 if any fails.
    Verify { config: PathBuf },
    /// Solve one profile per sweep.rho0_list entry; write a summary table.
    Sweep { config: PathBuf },
    /// Integrate and write the SVG plot.
    Plot { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, config) = match cli.command {
        Cmd::Solve { config } => (Command::Solve, config),
        Cmd::Verify { config } => (Command::Verify, config),
        Cmd::Sweep { config } => (Command::Sweep, config),
        Cmd::Plot { config } => (Command::Plot, config),
    };
    ExitCode::from(run(command, &config) as u8)
}
