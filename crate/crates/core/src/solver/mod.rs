//! Waist-to-infinity integration of the rotational Weingarten profile.
//!
//! The equation is implicit in its highest derivative. Each right-hand side
//! evaluation closes it by a scalar Newton solve, and the outer stepping is
//! Dormand-Prince 5(4) with adaptive steps.

pub mod dopri;
pub mod newton;

use std::fmt;

use crate::analysis::{self, HeightAsymptote};
use crate::curvature::{ArcState, GraphState, DEFAULT_DRIFT_TOL};
use crate::error::{Error, Result};
use crate::geometry::WarpingFunction;
use crate::weingarten::EllipticFunction;

use dopri::{Flow, StepControl, StepStats};
pub use newton::{
    minimal_rho_tt, minimal_t_ss, newton_graph_rho_tt, newton_highest_derivative, newton_kappa1,
    NewtonOutcome,
};

/// Below this `|rho_s|` the arc closure goes through `kappa1` directly,
/// since `Q` divides by `rho_s`.
pub const WAIST_SWITCH: f64 = 1e-8;
/// Smallest step accepted by the outer integrator.
pub const MIN_STEP: f64 = 1e-14;
/// `2h` beyond which `e^{2h}` is no longer representable.
const WARP_EXPONENT_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Largest outer step, in `s` for arc form and `t` for graph form.
    pub max_step: f64,
    pub s_max: f64,
    pub rho_max: f64,
    pub drift_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            newton_tol: 1e-12,
            newton_max_iter: 25,
            max_step: 0.5,
            s_max: 50.0,
            rho_max: 1e6,
            drift_tol: DEFAULT_DRIFT_TOL,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("newton_tol", self.newton_tol),
            ("max_step", self.max_step),
            ("s_max", self.s_max),
            ("rho_max", self.rho_max),
            ("drift_tol", self.drift_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || value.is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if self.newton_max_iter == 0 {
            return Err(Error::InvalidParameter(
                "newton_max_iter must be positive".into(),
            ));
        }
        Ok(())
    }

    fn step_control(&self) -> StepControl {
        StepControl {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            min_step: MIN_STEP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// Reached the end of the requested span.
    Completed,
    /// `|rho_t|` exceeded `1/sqrt(eps)` in graph form.
    VerticalTangent,
    RadiusCap,
    /// `t_s` is no longer a positive normal number.
    FiberSpeedUnderflow,
    /// `e^{2h}` would overflow.
    WarpOverflow,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::Completed => "completed",
            TerminationReason::VerticalTangent => "vertical_tangent",
            TerminationReason::RadiusCap => "radius_cap",
            TerminationReason::FiberSpeedUnderflow => "fiber_speed_underflow",
            TerminationReason::WarpOverflow => "warp_overflow",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Catenoidal,
    UnboundedHeight,
    Truncated,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Catenoidal => "catenoidal",
            Classification::UnboundedHeight => "unbounded_height",
            Classification::Truncated => "truncated",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed second derivatives at an arc sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcAcceleration {
    pub rho_ss: f64,
    pub t_ss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionMetadata {
    pub warping: WarpingFunction,
    pub elliptic: EllipticFunction,
    pub options: SolverOptions,
    pub termination: TerminationReason,
    /// True when the `s < 0` branch has been attached.
    pub mirrored: bool,
    /// `h_rho(rho0) * rho0`.
    pub eut_product: f64,
    /// `h(rho0) * rho0`.
    pub mt1_product: f64,
    /// Set when `h_rho(rho0) * rho0 < 1`.
    pub eut_warning: bool,
    pub stats: StepStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    /// Samples in strictly increasing `s`.
    pub samples: Vec<ArcState>,
    /// Closed `(rho_ss, t_ss)` at each sample.
    pub accelerations: Vec<ArcAcceleration>,
    pub rho0: f64,
    pub s0: f64,
    pub t0_estimate: Option<HeightAsymptote>,
    pub classification: Option<Classification>,
    pub metadata: SolutionMetadata,
}

impl ProfileSolution {
    /// Index of the waist sample (`s = s0`).
    pub fn waist_index(&self) -> usize {
        self.samples
            .iter()
            .position(|a| a.s == self.s0)
            .unwrap_or(0)
    }

    /// The branch `s >= s0`.
    pub fn forward(&self) -> &[ArcState] {
        &self.samples[self.waist_index()..]
    }

    pub fn forward_accelerations(&self) -> &[ArcAcceleration] {
        &self.accelerations[self.waist_index()..]
    }

    pub fn s_end(&self) -> f64 {
        self.samples.last().map_or(self.s0, |a| a.s)
    }

    /// Attaches the reflected branch `s < s0`.
    ///
    /// Reflection about the waist slice maps `(rho, rho_s, t, t_s)` at
    /// `s0 + d` to `(rho, -rho_s, 2 t(s0) - t, t_s)` at `s0 - d`.
    pub fn mirror(&mut self) {
        if self.metadata.mirrored {
            return;
        }
        let k = self.waist_index();
        let waist = self.samples[k];
        let mut samples = Vec::with_capacity(2 * self.samples.len() - 1);
        let mut accel = Vec::with_capacity(samples.capacity());
        for (a, acc) in self.samples[k + 1..]
            .iter()
            .zip(&self.accelerations[k + 1..])
            .rev()
        {
            samples.push(ArcState {
                s: 2.0 * waist.s - a.s,
                rho: a.rho,
                rho_s: -a.rho_s,
                t: 2.0 * waist.t - a.t,
                t_s: a.t_s,
            });
            accel.push(ArcAcceleration {
                rho_ss: acc.rho_ss,
                t_ss: -acc.t_ss,
            });
        }
        samples.extend_from_slice(&self.samples[k..]);
        accel.extend_from_slice(&self.accelerations[k..]);
        self.samples = samples;
        self.accelerations = accel;
        self.metadata.mirrored = true;
    }

    /// Cubic Hermite interpolation of the state at `s`, `None` outside the
    /// sampled range.
    pub fn interpolate(&self, s: f64) -> Option<ArcState> {
        let first = self.samples.first()?;
        let last = self.samples.last()?;
        if !(s >= first.s && s <= last.s) {
            return None;
        }
        let i = match self.samples.binary_search_by(|a| a.s.total_cmp(&s)) {
            Ok(i) => return Some(self.samples[i]),
            Err(i) => i - 1,
        };
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let (da, db) = (self.accelerations[i], self.accelerations[i + 1]);
        let h = b.s - a.s;
        let x = (s - a.s) / h;
        let hermite = |p0: f64, m0: f64, p1: f64, m1: f64| {
            let x2 = x * x;
            let x3 = x2 * x;
            (2.0 * x3 - 3.0 * x2 + 1.0) * p0
                + (x3 - 2.0 * x2 + x) * h * m0
                + (-2.0 * x3 + 3.0 * x2) * p1
                + (x3 - x2) * h * m1
        };
        Some(ArcState {
            s,
            rho: hermite(a.rho, a.rho_s, b.rho, b.rho_s),
            rho_s: hermite(a.rho_s, da.rho_ss, b.rho_s, db.rho_ss),
            t: hermite(a.t, a.t_s, b.t, b.t_s),
            t_s: hermite(a.t_s, da.t_ss, b.t_s, db.t_ss),
        })
    }
}

/// Closes the arc-length system at `a`: returns `(rho_ss, t_ss)`.
///
/// Away from the waist this solves `Q = 0` for `t_ss`. Near it, the
/// Weingarten relation is solved for `kappa1` given `kappa2 = e^h t_s / rho`.
/// Both paths then use `rho_ss = tau (h_rho tau - kappa1)` with
/// `tau = e^h t_s`.
pub fn close_arc(
    w: &WarpingFunction,
    f: &EllipticFunction,
    a: &ArcState,
    opts: &SolverOptions,
) -> Result<ArcAcceleration> {
    if !(a.rho > 0.0) {
        return Err(Error::AxisContact {
            at: a.s,
            rho: a.rho,
        });
    }
    let (h, h_rho) = w.eval(a.rho);
    if 2.0 * h > WARP_EXPONENT_LIMIT {
        return Err(Error::DegenerateState("warp factor overflow"));
    }
    let eh = h.exp();
    let tau = eh * a.t_s;
    let kappa1 = if a.rho_s.abs() < WAIST_SWITCH {
        newton_kappa1(f, tau / a.rho, opts)?.root
    } else {
        let guess = minimal_t_ss(w, a.rho, a.rho_s, a.t_s);
        let t_ss = newton_highest_derivative(w, f, a.rho, a.rho_s, a.t_s, guess, opts)?.root;
        eh * (t_ss / a.rho_s + 2.0 * h_rho * a.t_s)
    };
    let rho_ss = tau * (h_rho * tau - kappa1);
    let t_ss = a.rho_s * (kappa1 / eh - 2.0 * h_rho * a.t_s);
    if !(rho_ss.is_finite() && t_ss.is_finite()) {
        return Err(Error::DegenerateState("non-finite closure"));
    }
    Ok(ArcAcceleration { rho_ss, t_ss })
}

/// Waist state `(rho0, 0, 0, e^{-h(rho0)})` at `s = 0`.
pub fn waist_state(w: &WarpingFunction, rho0: f64) -> ArcState {
    ArcState {
        s: 0.0,
        rho: rho0,
        rho_s: 0.0,
        t: 0.0,
        t_s: (-w.h(rho0)).exp(),
    }
}

fn check_rho0(rho0: f64) -> Result<()> {
    if rho0 > 0.0 && rho0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "rho0 must be positive, got {rho0}"
        )))
    }
}

/// Rescales `(e^h t_s, rho_s)` to unit Euclidean norm.
fn project_unit_speed(w: &WarpingFunction, y: &mut [f64; 4]) {
    let eh = w.h(y[0]).exp();
    let tau = eh * y[3];
    let norm = tau.hypot(y[1]);
    if norm > 0.0 {
        y[1] /= norm;
        y[3] = tau / norm / eh;
    }
}

struct Branch {
    samples: Vec<ArcState>,
    accelerations: Vec<ArcAcceleration>,
    termination: TerminationReason,
    stats: StepStats,
}

/// Integrates from the waist to `s = direction * s_max`.
fn integrate_branch(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    direction: f64,
    opts: &SolverOptions,
) -> Result<Branch> {
    check_rho0(rho0)?;
    opts.validate()?;
    let start = waist_state(w, rho0);
    let mut samples = vec![start];
    let mut accelerations = vec![close_arc(w, f, &start, opts)?];
    let mut termination = TerminationReason::Completed;
    let to_state = |s: f64, y: &[f64; 4]| ArcState {
        s,
        rho: y[0],
        rho_s: y[1],
        t: y[2],
        t_s: y[3],
    };
    let rhs = |s: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let acc = close_arc(w, f, &to_state(s, y), opts)?;
        Ok([y[1], acc.rho_ss, y[3], acc.t_ss])
    };
    let outcome = dopri::integrate(
        rhs,
        0.0,
        [start.rho, start.rho_s, start.t, start.t_s],
        direction * opts.s_max,
        &opts.step_control(),
        |s, y| {
            if !(y[0] > 0.0) {
                return Err(Error::AxisContact { at: s, rho: y[0] });
            }
            let mut flow = Flow::Continue;
            let defect = to_state(s, y).unit_speed_defect(w);
            if defect.abs() > opts.drift_tol / 10.0 {
                project_unit_speed(w, y);
                flow = Flow::Projected;
            }
            let state = to_state(s, y);
            samples.push(state);
            accelerations.push(close_arc(w, f, &state, opts)?);
            if y[0] > opts.rho_max {
                termination = TerminationReason::RadiusCap;
                return Ok(Flow::Stop);
            }
            if !(y[3].is_normal() && y[3] > 0.0) {
                termination = TerminationReason::FiberSpeedUnderflow;
                return Ok(Flow::Stop);
            }
            if 2.0 * w.h(y[0]) > WARP_EXPONENT_LIMIT - 50.0 {
                termination = TerminationReason::WarpOverflow;
                return Ok(Flow::Stop);
            }
            Ok(flow)
        },
    )?;
    Ok(Branch {
        samples,
        accelerations,
        termination,
        stats: outcome.stats,
    })
}

fn metadata(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    opts: &SolverOptions,
    termination: TerminationReason,
    stats: StepStats,
) -> SolutionMetadata {
    let (h, h_rho) = w.eval(rho0);
    let eut_product = h_rho * rho0;
    SolutionMetadata {
        warping: w.clone(),
        elliptic: f.clone(),
        options: *opts,
        termination,
        mirrored: false,
        eut_product,
        mt1_product: h * rho0,
        eut_warning: eut_product < 1.0,
        stats,
    }
}

/// Integrates the branch `s in [0, s_max]` from the waist.
pub fn integrate_arc(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    opts: &SolverOptions,
) -> Result<ProfileSolution> {
    let branch = integrate_branch(w, f, rho0, 1.0, opts)?;
    Ok(ProfileSolution {
        samples: branch.samples,
        accelerations: branch.accelerations,
        rho0,
        s0: 0.0,
        t0_estimate: None,
        classification: None,
        metadata: metadata(w, f, rho0, opts, branch.termination, branch.stats),
    })
}

/// Integrates the branch `s in [-s_max, 0]` directly, without reflection.
/// Samples are returned in decreasing `s`.
pub fn integrate_arc_backward(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    opts: &SolverOptions,
) -> Result<Vec<ArcState>> {
    integrate_branch(w, f, rho0, -1.0, opts).map(|b| b.samples)
}

/// Full profile: forward branch, mirrored branch, asymptote and class.
pub fn solve_profile(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    opts: &SolverOptions,
) -> Result<ProfileSolution> {
    let mut sol = integrate_arc(w, f, rho0, opts)?;
    let asymptote = analysis::estimate_height_asymptote(&sol);
    let diverging = analysis::check_radius_divergence(&sol);
    sol.classification = Some(analysis::classify(asymptote.as_ref().ok(), diverging));
    sol.t0_estimate = asymptote.ok();
    sol.mirror();
    Ok(sol)
}

/// Rebuilds a profile from stored states, e.g. read back from a file.
///
/// Accelerations are re-closed at every sample; the waist is the sample at
/// `s = 0`, and the solution counts as mirrored when samples with `s < 0`
/// are present. Asymptote and class are recomputed from the forward branch.
pub fn rebuild_profile(
    w: &WarpingFunction,
    f: &EllipticFunction,
    samples: Vec<ArcState>,
    opts: &SolverOptions,
) -> Result<ProfileSolution> {
    if samples.windows(2).any(|p| !(p[0].s < p[1].s)) {
        return Err(Error::InvalidParameter(
            "samples must have strictly increasing s".into(),
        ));
    }
    let waist = samples
        .iter()
        .find(|a| a.s == 0.0)
        .copied()
        .ok_or_else(|| Error::InvalidParameter("no waist sample at s = 0".into()))?;
    let accelerations = samples
        .iter()
        .map(|a| close_arc(w, f, a, opts))
        .collect::<Result<Vec<_>>>()?;
    let mirrored = samples[0].s < 0.0;
    let mut meta = metadata(
        w,
        f,
        waist.rho,
        opts,
        TerminationReason::Completed,
        StepStats::default(),
    );
    meta.mirrored = mirrored;
    let mut sol = ProfileSolution {
        samples,
        accelerations,
        rho0: waist.rho,
        s0: 0.0,
        t0_estimate: None,
        classification: None,
        metadata: meta,
    };
    let asymptote = analysis::estimate_height_asymptote(&sol);
    let diverging = analysis::check_radius_divergence(&sol);
    sol.classification = Some(analysis::classify(asymptote.as_ref().ok(), diverging));
    sol.t0_estimate = asymptote.ok();
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSolution {
    /// Accepted `(state, rho_tt)` pairs in integration order.
    pub samples: Vec<(GraphState, f64)>,
    pub termination: TerminationReason,
    pub stats: StepStats,
    pub eut_warning: bool,
}

/// Integrates the graph `rho(t)` from `rho(0) = rho0, rho_t(0) = 0` to
/// `t_end` (either sign).
pub fn integrate_graph(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    t_end: f64,
    opts: &SolverOptions,
) -> Result<GraphSolution> {
    check_rho0(rho0)?;
    opts.validate()?;
    let vertical = 1.0 / f64::EPSILON.sqrt();
    let close = |g: &GraphState| -> Result<f64> {
        if !(g.rho > 0.0) {
            return Err(Error::AxisContact {
                at: g.t,
                rho: g.rho,
            });
        }
        if 2.0 * w.h(g.rho) > WARP_EXPONENT_LIMIT {
            return Err(Error::DegenerateState("warp factor overflow"));
        }
        let guess = minimal_rho_tt(w, g);
        Ok(newton_graph_rho_tt(w, f, g, guess, opts)?.root)
    };
    let to_state = |t: f64, y: &[f64; 2]| GraphState {
        t,
        rho: y[0],
        rho_t: y[1],
    };
    let start = to_state(0.0, &[rho0, 0.0]);
    let mut samples = vec![(start, close(&start)?)];
    let mut termination = TerminationReason::Completed;
    let outcome = dopri::integrate(
        |t, y: &[f64; 2]| Ok([y[1], close(&to_state(t, y))?]),
        0.0,
        [rho0, 0.0],
        t_end,
        &opts.step_control(),
        |t, y| {
            let g = to_state(t, y);
            samples.push((g, close(&g)?));
            if y[1].abs() > vertical {
                termination = TerminationReason::VerticalTangent;
                return Ok(Flow::Stop);
            }
            if y[0] > opts.rho_max {
                termination = TerminationReason::RadiusCap;
                return Ok(Flow::Stop);
            }
            Ok(Flow::Continue)
        },
    )?;
    Ok(GraphSolution {
        samples,
        termination,
        stats: outcome.stats,
        eut_warning: w.h_rho(rho0) * rho0 < 1.0,
    })
}
