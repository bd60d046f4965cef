//! Run configuration: a TOML file with the sections `warping`, `weingarten`,
//! `solve`, `output` and `sweep`. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use ewmt_core::weingarten::{DEFAULT_EPSILON, DEFAULT_EVAL_FLOOR};
use ewmt_core::{EllipticFamily, EllipticFunction, SolverOptions, WarpingFunction};

use crate::error::{CliError, CliResult};

/// Environment variable that relocates relative output paths.
pub const OUTPUT_DIR_ENV: &str = "EWMT_OUTPUT_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    warping: RawWarping,
    #[serde(default)]
    weingarten: RawWeingarten,
    solve: RawSolve,
    #[serde(default)]
    output: RawOutput,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWarping {
    family: String,
    #[serde(default)]
    coefficients: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeingarten {
    family: String,
    alpha: Option<f64>,
    coefficients: Option<Vec<f64>>,
    epsilon: Option<f64>,
    eval_floor: Option<f64>,
}

impl Default for RawWeingarten {
    fn default() -> Self {
        RawWeingarten {
            family: "zero".into(),
            alpha: None,
            coefficients: None,
            epsilon: None,
            eval_floor: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolve {
    rho0: f64,
    s_max: Option<f64>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    newton_tol: Option<f64>,
    newton_max_iter: Option<usize>,
    max_step: Option<f64>,
    rho_max: Option<f64>,
    drift_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv_path: Option<PathBuf>,
    report_path: Option<PathBuf>,
    svg_path: Option<PathBuf>,
    sweep_path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    rho0_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
    pub svg_path: PathBuf,
    pub sweep_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub warping: WarpingFunction,
    pub elliptic: EllipticFunction,
    pub rho0: f64,
    pub options: SolverOptions,
    pub output: OutputPaths,
    pub rho0_list: Option<Vec<f64>>,
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn elliptic(raw: &RawWeingarten) -> CliResult<EllipticFunction> {
    let family = match raw.family.as_str() {
        "zero" => EllipticFamily::Zero,
        "sqrt_scaled" => EllipticFamily::SqrtScaled {
            alpha: raw
                .alpha
                .ok_or_else(|| config_err("weingarten.alpha is required for sqrt_scaled"))?,
        },
        "custom_polynomial" => {
            EllipticFamily::CustomPolynomial(raw.coefficients.clone().ok_or_else(|| {
                config_err("weingarten.coefficients is required for custom_polynomial")
            })?)
        }
        other => return Err(config_err(format!("unknown weingarten family '{other}'"))),
    };
    let f = EllipticFunction::new(
        family,
        raw.epsilon.unwrap_or(DEFAULT_EPSILON),
        raw.eval_floor.unwrap_or(DEFAULT_EVAL_FLOOR),
    )
    .map_err(config_err)?;
    f.ensure_elliptic().map_err(config_err)?;
    Ok(f)
}

/// Resolves a relative output path against `output_dir` when given.
pub fn resolve(path: &Path, output_dir: Option<&Path>) -> PathBuf {
    match output_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

impl RunConfig {
    /// Parses and validates configuration text. `stem` names default output
    /// files; `output_dir` relocates relative paths.
    pub fn parse(text: &str, stem: &str, output_dir: Option<&Path>) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(config_err)?;
        let warping = WarpingFunction::from_parts(&raw.warping.family, &raw.warping.coefficients)
            .map_err(config_err)?;
        let elliptic = elliptic(&raw.weingarten)?;

        let s = &raw.solve;
        if !(s.rho0 > 0.0 && s.rho0.is_finite()) {
            return Err(config_err("rho0 must be positive"));
        }
        let d = SolverOptions::default();
        let options = SolverOptions {
            rel_tol: s.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: s.abs_tol.unwrap_or(d.abs_tol),
            newton_tol: s.newton_tol.unwrap_or(d.newton_tol),
            newton_max_iter: s.newton_max_iter.unwrap_or(d.newton_max_iter),
            max_step: s.max_step.unwrap_or(d.max_step),
            s_max: s.s_max.unwrap_or(d.s_max),
            rho_max: s.rho_max.unwrap_or(d.rho_max),
            drift_tol: s.drift_tol.unwrap_or(d.drift_tol),
        };
        options.validate().map_err(config_err)?;

        let rho0_list = match &raw.sweep {
            None => None,
            Some(sw) => {
                if sw.rho0_list.is_empty() {
                    return Err(config_err("sweep.rho0_list must not be empty"));
                }
                if let Some(bad) = sw.rho0_list.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
                    return Err(config_err(format!(
                        "sweep.rho0_list: rho0 must be positive, got {bad}"
                    )));
                }
                Some(sw.rho0_list.clone())
            }
        };

        let o = &raw.output;
        let path = |p: &Option<PathBuf>, ext: &str| {
            resolve(
                &p.clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{stem}.{ext}"))),
                output_dir,
            )
        };
        let output = OutputPaths {
            csv_path: path(&o.csv_path, "csv"),
            report_path: path(&o.report_path, "json"),
            svg_path: path(&o.svg_path, "svg"),
            sweep_path: resolve(
                &o.sweep_path
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{stem}_sweep.csv"))),
                output_dir,
            ),
        };
        Ok(RunConfig {
            warping,
            elliptic,
            rho0: s.rho0,
            options,
            output,
            rho0_list,
        })
    }

    /// Reads `path`, honouring [`OUTPUT_DIR_ENV`].
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("ewmt")
            .to_string();
        let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
        Self::parse(&text, &stem, dir.as_deref())
    }
}
