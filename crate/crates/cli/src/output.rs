//! Profile CSV, sweep CSV and the JSON verification report.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use ewmt_core::analysis::relation_residual;
use ewmt_core::curvature::arc_curvatures;
use ewmt_core::sweep::SweepRow;
use ewmt_core::{
    ArcState, EllipticFamily, EllipticFunction, InvariantReport, ProfileSolution, WarpingFunction,
};

use crate::error::{CliError, CliResult};

pub const PROFILE_HEADER: &str = "s,rho,rho_s,t,t_s,kappa1,kappa2,H,K,residual";
pub const SWEEP_HEADER: &str = "rho0,t0,classification,h_rho_rho0_product,eut_hypothesis,error";

/// 17 significant digits: lossless for `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Creates parent directories as needed; every failure maps to exit 4.
pub fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

pub fn profile_csv(sol: &ProfileSolution) -> String {
    let w = &sol.metadata.warping;
    let f = &sol.metadata.elliptic;
    let mut out = String::with_capacity(200 * sol.samples.len());
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for (a, acc) in sol.samples.iter().zip(&sol.accelerations) {
        let (k1, k2, h, k, r) = match arc_curvatures(w, a, acc.rho_ss) {
            Ok(p) => {
                let r = relation_residual(f, &p).unwrap_or(f64::NAN);
                (p.kappa1, p.kappa2, p.mean, p.extrinsic, r)
            }
            Err(_) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        let cols = [a.s, a.rho, a.rho_s, a.t, a.t_s, k1, k2, h, k, r].map(fmt17);
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Reads the state columns of a profile CSV back.
pub fn read_profile_csv(text: &str) -> Result<Vec<ArcState>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == PROFILE_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let v: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("line {}: {e}", i + 2))?;
            if v.len() != 10 {
                return Err(format!(
                    "line {}: expected 10 columns, got {}",
                    i + 2,
                    v.len()
                ));
            }
            Ok(ArcState {
                s: v[0],
                rho: v[1],
                rho_s: v[2],
                t: v[3],
                t_s: v[4],
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        let hyp = if row.eut_warning { "warn" } else { "ok" };
        let (t0, class, err) = match &row.outcome {
            Ok(sol) => (
                sol.t0_estimate
                    .map_or_else(|| "nan".into(), |a| fmt17(a.t0.to_f64())),
                sol.classification
                    .map_or("truncated", |c| c.as_str())
                    .to_string(),
                String::new(),
            ),
            Err(e) => (
                "nan".to_string(),
                "error".to_string(),
                format!("{}: {}", e.kind(), e).replace([',', '\n'], ";"),
            ),
        };
        let _ = writeln!(
            out,
            "{},{t0},{class},{},{hyp},{err}",
            fmt17(row.rho0),
            fmt17(row.h_rho_rho0)
        );
    }
    out
}

/// `null` cannot carry infinities, so non-finite values become strings.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Num {
    Finite(f64),
    Special(&'static str),
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Num::Finite(x)
        } else if x.is_nan() {
            Num::Special("nan")
        } else if x > 0.0 {
            Num::Special("inf")
        } else {
            Num::Special("-inf")
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub check_name: String,
    pub passed: bool,
    pub worst_residual: Num,
    pub location_s: Num,
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FunctionEntry {
    pub family: &'static str,
    pub coefficients: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_floor: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub rho0: f64,
    pub warping: FunctionEntry,
    pub weingarten: FunctionEntry,
    pub samples: usize,
    pub termination: &'static str,
    pub classification: &'static str,
    pub t0: Num,
    pub t0_error_bound: Num,
    pub eut_product: f64,
    pub mt1_product: f64,
    pub eut_hypothesis: &'static str,
    pub h_rho_min: Num,
    pub checks: Vec<CheckEntry>,
    pub overall: bool,
}

fn warping_entry(w: &WarpingFunction) -> FunctionEntry {
    FunctionEntry {
        family: w.family(),
        coefficients: w.coefficients(),
        epsilon: None,
        eval_floor: None,
    }
}

fn elliptic_entry(f: &EllipticFunction) -> FunctionEntry {
    let coefficients = match f.family() {
        EllipticFamily::Zero => vec![],
        EllipticFamily::SqrtScaled { alpha } => vec![*alpha],
        EllipticFamily::CustomPolynomial(c) => c.clone(),
    };
    FunctionEntry {
        family: f.family_name(),
        coefficients,
        epsilon: Some(f.epsilon()),
        eval_floor: Some(f.eval_floor()),
    }
}

pub fn build_report(sol: &ProfileSolution, report: &InvariantReport) -> Report {
    let m = &sol.metadata;
    let (t0, bound) = sol
        .t0_estimate
        .map_or((f64::NAN, f64::NAN), |a| (a.t0.to_f64(), a.error_bound));
    Report {
        rho0: sol.rho0,
        warping: warping_entry(&m.warping),
        weingarten: elliptic_entry(&m.elliptic),
        samples: sol.samples.len(),
        termination: m.termination.as_str(),
        classification: sol.classification.map_or("truncated", |c| c.as_str()),
        t0: t0.into(),
        t0_error_bound: bound.into(),
        eut_product: m.eut_product,
        mt1_product: m.mt1_product,
        eut_hypothesis: if m.eut_warning { "warn" } else { "ok" },
        h_rho_min: report.h_rho_min.into(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckEntry {
                check_name: c.check_name.clone(),
                passed: c.passed,
                worst_residual: c.worst_residual.into(),
                location_s: c.location_s.into(),
                skipped: c.skipped,
                note: c.note.clone(),
            })
            .collect(),
        overall: report.overall,
    }
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is always serializable");
    s.push('\n');
    s
}
