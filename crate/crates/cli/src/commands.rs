//! The four subcommands. Each returns the process exit code on success
//! paths (0, or 1 for a failed verification) and a [`CliError`] otherwise.

use std::path::Path;

use ewmt_core::sweep::solve_family;
use ewmt_core::{solve_profile, verify_invariants, InvariantReport, ProfileSolution};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{build_report, profile_csv, report_json, sweep_csv, write_file};
use crate::plot::render_svg;

fn warn_hypothesis(cfg: &RunConfig, sol: &ProfileSolution) {
    let m = &sol.metadata;
    if m.eut_warning {
        eprintln!(
            "warning: h_rho(rho0)*rho0 = {} < 1 at rho0 = {} (existence hypothesis not met); h(rho0)*rho0 = {}",
            m.eut_product, cfg.rho0, m.mt1_product
        );
    }
}

fn solve_and_verify(cfg: &RunConfig) -> CliResult<(ProfileSolution, InvariantReport)> {
    let sol = solve_profile(&cfg.warping, &cfg.elliptic, cfg.rho0, &cfg.options)?;
    warn_hypothesis(cfg, &sol);
    let report = verify_invariants(&sol, &cfg.warping, &cfg.elliptic);
    Ok((sol, report))
}

fn summary(sol: &ProfileSolution, report: &InvariantReport) {
    let class = sol.classification.map_or("truncated", |c| c.as_str());
    println!("classification: {class}");
    match sol.t0_estimate {
        Some(a) => println!("t0: {} (error bound {:e})", a.t0, a.error_bound),
        None => println!("t0: unavailable"),
    }
    println!("samples: {}", sol.samples.len());
    for c in &report.checks {
        let verdict = match (c.passed, c.skipped) {
            (_, true) => "skip",
            (true, false) => "pass",
            (false, false) => "FAIL",
        };
        println!(
            "  {verdict} {} (worst {:e} at s = {})",
            c.check_name, c.worst_residual, c.location_s
        );
    }
}

pub fn run_solve(cfg: &RunConfig) -> CliResult<i32> {
    let (sol, report) = solve_and_verify(cfg)?;
    write_file(&cfg.output.csv_path, profile_csv(&sol).as_bytes())?;
    write_file(
        &cfg.output.report_path,
        report_json(&build_report(&sol, &report)).as_bytes(),
    )?;
    summary(&sol, &report);
    Ok(0)
}

pub fn run_verify(cfg: &RunConfig) -> CliResult<i32> {
    let (sol, report) = solve_and_verify(cfg)?;
    write_file(
        &cfg.output.report_path,
        report_json(&build_report(&sol, &report)).as_bytes(),
    )?;
    summary(&sol, &report);
    println!("overall: {}", if report.overall { "pass" } else { "FAIL" });
    Ok(if report.overall { 0 } else { 1 })
}

pub fn run_sweep(cfg: &RunConfig) -> CliResult<i32> {
    let list = cfg
        .rho0_list
        .as_deref()
        .ok_or_else(|| CliError::Config("sweep.rho0_list is required for sweep".into()))?;
    let rows = solve_family(&cfg.warping, &cfg.elliptic, list, &cfg.options);
    write_file(&cfg.output.sweep_path, sweep_csv(&rows).as_bytes())?;
    for row in rows.iter().filter(|r| r.eut_warning) {
        eprintln!(
            "warning: h_rho(rho0)*rho0 = {} < 1 at rho0 = {}",
            row.h_rho_rho0, row.rho0
        );
    }
    let ok = rows.iter().filter(|r| r.outcome.is_ok()).count();
    println!("sweep: {ok}/{} rows solved", rows.len());
    match rows.iter().find_map(|r| r.outcome.as_ref().err()) {
        Some(e) if ok == 0 => Err(e.clone().into()),
        _ => Ok(0),
    }
}

pub fn emit_plot(sol: &ProfileSolution, svg_path: &Path) -> CliResult<i32> {
    if sol.samples.is_empty() {
        return Err(CliError::Config("cannot plot an empty solution".into()));
    }
    write_file(svg_path, render_svg(sol).as_bytes())?;
    Ok(0)
}

pub fn run_plot(cfg: &RunConfig) -> CliResult<i32> {
    let sol = solve_profile(&cfg.warping, &cfg.elliptic, cfg.rho0, &cfg.options)?;
    warn_hypothesis(cfg, &sol);
    emit_plot(&sol, &cfg.output.svg_path)
}
