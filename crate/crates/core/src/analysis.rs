//! Post-hoc checks on a computed profile and the asymptotic height estimate.

use crate::curvature::{arc_curvatures, arc_curvatures_from_t_ss, CurvaturePair};
use crate::error::{Error, Result};
use crate::geometry::WarpingFunction;
use crate::solver::{Classification, ProfileSolution, WAIST_SWITCH};
use crate::weingarten::EllipticFunction;
use crate::ExtendedReal;

/// Minimum number of samples in the tail-fit window.
pub const MIN_TAIL_SAMPLES: usize = 10;
/// `t_s` must fall by at least this factor across the window to count as
/// exponential decay.
pub const MIN_TAIL_DECAY: f64 = 10.0;
pub const K_TOL: f64 = 1e-12;
pub const RELATION_TOL: f64 = 1e-9;
pub const SYMMETRY_TOL: f64 = 1e-7;

pub const CHECK_NAMES: [&str; 12] = [
    "extrinsic_curvature_nonpositive",
    "principal_curvature_signs",
    "fiber_speed_positive",
    "waist_unique",
    "off_axis",
    "height_monotone",
    "t_ss_sign",
    "rho_convexity",
    "unit_speed",
    // Relative to max(1, |H|), as is the form agreement on kappa1.
    "weingarten_relation",
    "curvature_form_agreement",
    "mirror_symmetry",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightAsymptote {
    pub t0: ExtendedReal,
    pub error_bound: f64,
    /// Fitted decay rate `m` of `t_s ~ a e^{m s}`.
    pub rate: f64,
    /// Fitted amplitude `a`.
    pub amplitude: f64,
}

/// Least-squares fit of `log t_s = log a + m s` on the last quartile of the
/// forward branch, extrapolated with `t(s_end) + (a/|m|) e^{m s_end}`.
pub fn estimate_height_asymptote(sol: &ProfileSolution) -> Result<HeightAsymptote> {
    let fwd = sol.forward();
    let n = fwd.len();
    let window = &fwd[n - n / 4..];
    if window.len() < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientTail {
            available: window.len(),
            required: MIN_TAIL_SAMPLES,
        });
    }
    if window.iter().any(|a| !(a.t_s > 0.0)) {
        return Err(Error::DegenerateState(
            "non-positive t_s in the tail window",
        ));
    }
    let k = window.len() as f64;
    let mean_s = window.iter().map(|a| a.s).sum::<f64>() / k;
    let mean_y = window.iter().map(|a| a.t_s.ln()).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for a in window {
        let dx = a.s - mean_s;
        sxy += dx * (a.t_s.ln() - mean_y);
        sxx += dx * dx;
    }
    let rate = sxy / sxx;
    let amplitude = (mean_y - rate * mean_s).exp();
    let last = window[window.len() - 1];
    let decay = window[0].t_s / last.t_s;
    if !(rate < 0.0) || !(decay >= MIN_TAIL_DECAY) {
        return Ok(HeightAsymptote {
            t0: ExtendedReal::PosInf,
            error_bound: f64::INFINITY,
            rate,
            amplitude,
        });
    }
    let tail = amplitude / rate.abs() * (rate * last.s).exp();
    let opts = &sol.metadata.options;
    let steps = (n - 1) as f64;
    let discretization = steps * (opts.abs_tol + opts.rel_tol * last.t.abs());
    Ok(HeightAsymptote {
        t0: ExtendedReal::Finite(last.t + tail),
        error_bound: tail + discretization,
        rate,
        amplitude,
    })
}

/// `rho(s_end) > 10 rho0` and `rho_s(s_end) >= rho_s(s_end / 2)`.
pub fn check_radius_divergence(sol: &ProfileSolution) -> bool {
    let fwd = sol.forward();
    let Some(end) = fwd.last() else { return false };
    if fwd.len() < 2 {
        return false;
    }
    let Some(half) = sol.interpolate(sol.s0 + 0.5 * (end.s - sol.s0)) else {
        return false;
    };
    end.rho > 10.0 * sol.rho0 && end.rho_s >= half.rho_s
}

pub fn classify(asymptote: Option<&HeightAsymptote>, diverging: bool) -> Classification {
    match asymptote {
        Some(a) if diverging && a.t0.is_finite() => Classification::Catenoidal,
        Some(_) if diverging => Classification::UnboundedHeight,
        _ => Classification::Truncated,
    }
}

/// Worst reflection mismatch over the forward samples, with its location.
pub fn symmetry_residual(sol: &ProfileSolution) -> (f64, f64) {
    let Some(waist) = sol.samples.get(sol.waist_index()) else {
        return (0.0, sol.s0);
    };
    let mut worst = (0.0, sol.s0);
    for a in sol.forward() {
        let d = a.s - sol.s0;
        let Some(b) = sol.interpolate(sol.s0 - d) else {
            continue;
        };
        let r = (a.rho - b.rho).abs().max((a.t + b.t - 2.0 * waist.t).abs());
        if r > worst.0 || r.is_nan() {
            worst = (r, a.s);
        }
    }
    worst
}

pub fn check_symmetry(full_sol: &ProfileSolution, tol: f64) -> bool {
    symmetry_residual(full_sol).0 < tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check_name: String,
    pub passed: bool,
    /// Least favourable value of the checked quantity.
    pub worst_residual: f64,
    pub location_s: f64,
    pub skipped: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub checks: Vec<CheckResult>,
    pub overall: bool,
    /// Minimum of `h_rho` over the traversed radii.
    pub h_rho_min: f64,
}

impl InvariantReport {
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Tracks the worst value of a statistic; `larger_is_worse` picks the
/// direction.
struct Worst {
    value: f64,
    at: f64,
    larger_is_worse: bool,
}

impl Worst {
    fn max() -> Self {
        Worst {
            value: f64::NEG_INFINITY,
            at: f64::NAN,
            larger_is_worse: true,
        }
    }

    fn min() -> Self {
        Worst {
            value: f64::INFINITY,
            at: f64::NAN,
            larger_is_worse: false,
        }
    }

    fn see(&mut self, v: f64, s: f64) {
        let worse = if v.is_nan() {
            !self.value.is_nan()
        } else if self.larger_is_worse {
            v > self.value
        } else {
            v < self.value
        };
        if worse {
            self.value = v;
            self.at = s;
        }
    }

    fn result(self, name: &str, passed: impl Fn(f64) -> bool) -> CheckResult {
        let empty = self.at.is_nan() && !self.value.is_nan();
        CheckResult {
            check_name: name.to_string(),
            passed: empty || passed(self.value),
            worst_residual: if empty { 0.0 } else { self.value },
            location_s: if empty { 0.0 } else { self.at },
            skipped: false,
            note: empty.then(|| "no applicable samples".to_string()),
        }
    }
}

fn skipped(name: &str, note: String) -> CheckResult {
    CheckResult {
        check_name: name.to_string(),
        passed: true,
        worst_residual: 0.0,
        location_s: 0.0,
        skipped: true,
        note: Some(note),
    }
}

/// Runs every named check on `sol`. Checks whose hypotheses fail are
/// reported as skipped with a note and count as passed.
pub fn verify_invariants(
    sol: &ProfileSolution,
    w: &WarpingFunction,
    f: &EllipticFunction,
) -> InvariantReport {
    let samples = &sol.samples;
    let accel = &sol.accelerations;
    let s0 = sol.s0;
    let opts = &sol.metadata.options;
    let h_rho_min = samples
        .iter()
        .map(|a| w.h_rho(a.rho))
        .fold(f64::INFINITY, f64::min);
    let positive_c = h_rho_min > 0.0;
    let hypothesis = |name: &str, needs_strict: bool| {
        skipped(
            name,
            format!(
                "requires min h_rho {} 0 on the traversed range, found {h_rho_min}",
                if needs_strict { ">" } else { ">=" }
            ),
        )
    };

    let mut k_max = Worst::max();
    let mut signs = Worst::max();
    let mut t_s_min = Worst::min();
    let mut waist = Worst::min();
    let mut rho_min = Worst::min();
    let mut t_step = Worst::min();
    let mut t_ss_sign = Worst::max();
    let mut rho_ss_min = Worst::min();
    let mut drift = Worst::max();
    let mut relation = Worst::max();
    let mut agreement = Worst::max();

    for (i, (a, acc)) in samples.iter().zip(accel).enumerate() {
        rho_min.see(a.rho, a.s);
        t_s_min.see(a.t_s, a.s);
        drift.see(a.unit_speed_defect(w).abs(), a.s);
        let side = (a.s - s0).signum();
        if a.s == s0 {
            waist.see(
                if a.rho_s.abs() <= WAIST_SWITCH {
                    1.0
                } else {
                    -a.rho_s.abs()
                },
                a.s,
            );
        } else {
            waist.see(side * a.rho_s, a.s);
            t_ss_sign.see(side * acc.t_ss, a.s);
        }
        rho_ss_min.see(acc.rho_ss, a.s);
        match arc_curvatures(w, a, acc.rho_ss) {
            Ok(pair) => {
                k_max.see(pair.extrinsic, a.s);
                signs.see(pair.kappa1.max(-pair.kappa2), a.s);
                match relation_residual(f, &pair) {
                    Ok(r) => relation.see(r / pair.mean.abs().max(1.0), a.s),
                    Err(_) => relation.see(f64::NAN, a.s),
                }
                if a.rho_s.abs() >= WAIST_SWITCH {
                    if let Ok(alt) = arc_curvatures_from_t_ss(w, a, acc.t_ss) {
                        let scale = pair.kappa1.abs().max(1.0);
                        agreement.see((alt.kappa1 - pair.kappa1).abs() / scale, a.s);
                    }
                }
            }
            Err(_) => {
                k_max.see(f64::NAN, a.s);
                signs.see(f64::NAN, a.s);
                relation.see(f64::NAN, a.s);
            }
        }
        if let Some(b) = samples.get(i + 1) {
            // Increments below what one step resolves (the local tolerance on
            // t, or the spacing of doubles) are only required not to decrease.
            let expected = 0.5 * (a.t_s + b.t_s) * (b.s - a.s);
            let dt = b.t - a.t;
            let t_max = a.t.abs().max(b.t.abs());
            let resolution = (2.0 * ulp(t_max)).max(opts.abs_tol + opts.rel_tol * t_max);
            if dt < 0.0 || expected > resolution {
                t_step.see(dt, b.s);
            }
        }
    }

    let drift_tol = opts.drift_tol;
    let mut checks = vec![
        k_max.result(CHECK_NAMES[0], |v| v <= K_TOL),
        if positive_c {
            signs.result(CHECK_NAMES[1], |v| v < 0.0)
        } else {
            hypothesis(CHECK_NAMES[1], true)
        },
        t_s_min.result(CHECK_NAMES[2], |v| v > 0.0),
        if positive_c {
            waist.result(CHECK_NAMES[3], |v| v > 0.0)
        } else {
            hypothesis(CHECK_NAMES[3], true)
        },
        rho_min.result(CHECK_NAMES[4], |v| v > 0.0),
        t_step.result(CHECK_NAMES[5], |v| v > 0.0),
        if positive_c {
            t_ss_sign.result(CHECK_NAMES[6], |v| v < 0.0)
        } else {
            hypothesis(CHECK_NAMES[6], true)
        },
        if h_rho_min >= 0.0 {
            rho_ss_min.result(CHECK_NAMES[7], |v| v > 0.0)
        } else {
            hypothesis(CHECK_NAMES[7], false)
        },
        drift.result(CHECK_NAMES[8], |v| v <= drift_tol),
        relation.result(CHECK_NAMES[9], |v| v <= RELATION_TOL),
        agreement.result(CHECK_NAMES[10], |v| v <= RELATION_TOL),
    ];
    checks.push(if sol.metadata.mirrored {
        let (r, at) = symmetry_residual(sol);
        CheckResult {
            check_name: CHECK_NAMES[11].to_string(),
            passed: r < SYMMETRY_TOL,
            worst_residual: r,
            location_s: at,
            skipped: false,
            note: None,
        }
    } else {
        skipped(
            CHECK_NAMES[11],
            "solution has no mirrored branch".to_string(),
        )
    });
    let overall = checks.iter().all(|c| c.passed);
    InvariantReport {
        checks,
        overall,
        h_rho_min,
    }
}

/// Distance from `H` to the filled-in graph of `f` at `H^2 - K`.
pub fn relation_residual(f: &EllipticFunction, pair: &CurvaturePair) -> Result<f64> {
    let (lo, hi) = f.f_hull(pair.umbilicity())?;
    Ok((lo - pair.mean).max(pair.mean - hi).max(0.0))
}

fn ulp(x: f64) -> f64 {
    if x == 0.0 {
        f64::from_bits(1)
    } else {
        f64::from_bits(x.to_bits() + 1) - x
    }
}
