//! Principal curvatures of a rotational surface and the Weingarten residuals.
//!
//! The surface is obtained by rotating a generating curve in the `rho t`
//! plane about the `t` axis. Two parametrizations are supported:
//! the graph `rho = rho(t)` and arc length `s` with
//! `e^{2h} t_s^2 + rho_s^2 = 1`. Orientation follows the unit normal
//! `N = (-e^h t_s, 0, e^{-h} rho_s)`, which gives `kappa2 > 0` when `t_s > 0`.

use crate::error::{Error, Result};
use crate::geometry::{TangentVector, WarpingFunction};
use crate::weingarten::EllipticFunction;

pub const DEFAULT_DRIFT_TOL: f64 = 1e-8;

/// Point on a graph-form generating curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphState {
    pub t: f64,
    pub rho: f64,
    pub rho_t: f64,
}

/// Point on an arc-length generating curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcState {
    pub s: f64,
    pub rho: f64,
    pub rho_s: f64,
    pub t: f64,
    pub t_s: f64,
}

impl ArcState {
    /// The metric-scaled fiber speed `e^h t_s`.
    pub fn fiber_speed(&self, w: &WarpingFunction) -> f64 {
        w.h(self.rho).exp() * self.t_s
    }

    /// `e^{2h} t_s^2 + rho_s^2 - 1`.
    pub fn unit_speed_defect(&self, w: &WarpingFunction) -> f64 {
        let tau = self.fiber_speed(w);
        tau * tau + self.rho_s * self.rho_s - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair {
    pub kappa1: f64,
    pub kappa2: f64,
    /// `H = (kappa1 + kappa2) / 2`.
    pub mean: f64,
    /// `K = kappa1 kappa2`.
    pub extrinsic: f64,
}

impl CurvaturePair {
    pub fn new(kappa1: f64, kappa2: f64) -> Self {
        CurvaturePair {
            kappa1,
            kappa2,
            mean: 0.5 * (kappa1 + kappa2),
            extrinsic: kappa1 * kappa2,
        }
    }

    /// `H^2 - K`, computed as `((kappa1 - kappa2) / 2)^2` to avoid cancellation.
    pub fn umbilicity(&self) -> f64 {
        let b = 0.5 * (self.kappa1 - self.kappa2);
        b * b
    }
}

/// `H - f(H^2 - K)`.
pub fn weingarten_residual(f: &EllipticFunction, pair: &CurvaturePair) -> Result<f64> {
    Ok(pair.mean - f.f_eval(pair.umbilicity())?)
}

fn require_off_axis(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateState(
            "generating curve state requires rho > 0",
        ))
    }
}

pub fn graph_curvatures(w: &WarpingFunction, g: &GraphState, rho_tt: f64) -> Result<CurvaturePair> {
    require_off_axis(g.rho)?;
    let (h, h_rho) = w.eval(g.rho);
    let eh = h.exp();
    let e2h = eh * eh;
    let a = e2h + g.rho_t * g.rho_t;
    let root = a.sqrt();
    let kappa1 = eh * (e2h * h_rho + 2.0 * h_rho * g.rho_t * g.rho_t - rho_tt) / (a * root);
    let kappa2 = eh / (g.rho * root);
    Ok(CurvaturePair::new(kappa1, kappa2))
}

/// Graph-form residual and its derivative with respect to `rho_tt`.
///
/// The derivative is `-(e^h / 2 A^{3/2}) (1 - 2 beta f'(beta^2))`, strictly
/// negative for elliptic `f`.
pub fn graph_residual_with_derivative(
    w: &WarpingFunction,
    f: &EllipticFunction,
    g: &GraphState,
    rho_tt: f64,
) -> Result<(f64, f64)> {
    let pair = graph_curvatures(w, g, rho_tt)?;
    let beta = 0.5 * (pair.kappa1 - pair.kappa2);
    let (fv, fp) = f.eval_with_derivative(beta * beta)?;
    let eh = w.h(g.rho).exp();
    let a = eh * eh + g.rho_t * g.rho_t;
    let dk1 = -eh / (a * a.sqrt());
    Ok((pair.mean - fv, 0.5 * dk1 * (1.0 - 2.0 * beta * fp)))
}

/// `H - f(H^2 - K)` for the graph `rho(t)` at `(g, rho_tt)`.
pub fn graph_residual(
    w: &WarpingFunction,
    f: &EllipticFunction,
    g: &GraphState,
    rho_tt: f64,
) -> Result<f64> {
    graph_residual_with_derivative(w, f, g, rho_tt).map(|(r, _)| r)
}

/// Arc-length residual `Q(u, v, z, w)` in `(rho, rho_s, t_s, t_ss)` and `dQ/dw`.
pub fn arc_residual_q(
    warp: &WarpingFunction,
    f: &EllipticFunction,
    u: f64,
    v: f64,
    z: f64,
    w: f64,
) -> Result<(f64, f64)> {
    if !(u > 0.0) {
        return Err(Error::DegenerateState("Q requires u = rho > 0"));
    }
    if v == 0.0 {
        return Err(Error::DegenerateState("Q requires v = rho_s != 0"));
    }
    let (h, h_rho) = warp.eval(u);
    let eh = h.exp();
    let beta = eh * ((w + 2.0 * h_rho * v * z) * u - z * v) / (2.0 * u * v);
    let (fv, fp) = f.eval_with_derivative(beta * beta)?;
    let q = 0.5 * eh * (w / v + z / u + 2.0 * h_rho * z) - fv;
    let dq_dw = eh / (2.0 * v) * (1.0 - 2.0 * beta * fp);
    Ok((q, dq_dw))
}

/// Principal curvatures from `rho_ss` (requires `t_s != 0`):
/// `kappa1 = (e^{2h} h_rho t_s^2 - rho_ss) / (e^h t_s)`, `kappa2 = e^h t_s / rho`.
pub fn arc_curvatures(w: &WarpingFunction, a: &ArcState, rho_ss: f64) -> Result<CurvaturePair> {
    require_off_axis(a.rho)?;
    if a.t_s == 0.0 {
        return Err(Error::DegenerateState(
            "kappa1 from rho_ss requires t_s != 0",
        ));
    }
    let (h, h_rho) = w.eval(a.rho);
    let eh = h.exp();
    let tau = eh * a.t_s;
    let kappa1 = h_rho * tau - rho_ss / tau;
    Ok(CurvaturePair::new(kappa1, tau / a.rho))
}

/// Principal curvatures from `t_ss` (requires `rho_s != 0`):
/// `kappa1 = e^h (t_ss / rho_s + 2 h_rho t_s)`.
pub fn arc_curvatures_from_t_ss(
    w: &WarpingFunction,
    a: &ArcState,
    t_ss: f64,
) -> Result<CurvaturePair> {
    require_off_axis(a.rho)?;
    if a.rho_s == 0.0 {
        return Err(Error::DegenerateState(
            "kappa1 from t_ss requires rho_s != 0",
        ));
    }
    let (h, h_rho) = w.eval(a.rho);
    let eh = h.exp();
    let kappa1 = eh * (t_ss / a.rho_s + 2.0 * h_rho * a.t_s);
    Ok(CurvaturePair::new(kappa1, eh * a.t_s / a.rho))
}

/// Unreduced form `kappa1 = e^h ([t_ss rho_s - t_s rho_ss] + h_rho t_s (1 + rho_s^2))`,
/// valid for any unit-speed state with both second derivatives known.
pub fn arc_curvatures_full(
    w: &WarpingFunction,
    a: &ArcState,
    rho_ss: f64,
    t_ss: f64,
) -> Result<CurvaturePair> {
    require_off_axis(a.rho)?;
    let (h, h_rho) = w.eval(a.rho);
    let eh = h.exp();
    let kappa1 =
        eh * ((t_ss * a.rho_s - a.t_s * rho_ss) + h_rho * a.t_s * (1.0 + a.rho_s * a.rho_s));
    Ok(CurvaturePair::new(kappa1, eh * a.t_s / a.rho))
}

/// Differentiated unit-speed constraint solved for `t_ss`:
/// `e^{2h} t_s (t_ss + h_rho t_s rho_s) + rho_s rho_ss = 0`.
pub fn constraint_t_ss(w: &WarpingFunction, a: &ArcState, rho_ss: f64) -> Result<f64> {
    if a.t_s == 0.0 {
        return Err(Error::DegenerateState(
            "constraint solve for t_ss requires t_s != 0",
        ));
    }
    let (h, h_rho) = w.eval(a.rho);
    let e2h = (2.0 * h).exp();
    Ok(-h_rho * a.t_s * a.rho_s - a.rho_s * rho_ss / (e2h * a.t_s))
}

/// The same constraint solved for `rho_ss`.
pub fn constraint_rho_ss(w: &WarpingFunction, a: &ArcState, t_ss: f64) -> Result<f64> {
    if a.rho_s == 0.0 {
        return Err(Error::DegenerateState(
            "constraint solve for rho_ss requires rho_s != 0",
        ));
    }
    let (h, h_rho) = w.eval(a.rho);
    let e2h = (2.0 * h).exp();
    Ok(-e2h * a.t_s * (t_ss + h_rho * a.t_s * a.rho_s) / a.rho_s)
}

pub fn unit_normal(w: &WarpingFunction, a: &ArcState) -> TangentVector {
    let eh = w.h(a.rho).exp();
    TangentVector::new(-eh * a.t_s, 0.0, a.rho_s / eh)
}

/// Graph data `(rho_t, rho_tt)` of an arc state, via the chain rule.
pub fn arc_to_graph(a: &ArcState, rho_ss: f64, t_ss: f64) -> Result<(GraphState, f64)> {
    if a.t_s == 0.0 {
        return Err(Error::DegenerateState("vertical tangent: no graph form"));
    }
    let rho_t = a.rho_s / a.t_s;
    let rho_tt = (rho_ss * a.t_s - a.rho_s * t_ss) / (a.t_s * a.t_s * a.t_s);
    Ok((
        GraphState {
            t: a.t,
            rho: a.rho,
            rho_t,
        },
        rho_tt,
    ))
}
