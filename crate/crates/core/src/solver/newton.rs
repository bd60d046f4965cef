//! Scalar Newton closures for the highest derivative.
//!
//! Every residual here is strictly monotone in its unknown as long as
//! `1 - 2 beta f'(beta^2) > 0`, so each closure has a simple root. The guard
//! is checked at every iterate.

use crate::curvature::{arc_residual_q, graph_residual_with_derivative, GraphState};
use crate::error::{Error, Result};
use crate::geometry::WarpingFunction;
use crate::weingarten::EllipticFunction;

use super::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOutcome {
    pub root: f64,
    /// Number of Newton updates applied before the residual test passed.
    pub iterations: usize,
    pub residual: f64,
}

/// One residual evaluation: value, derivative, and the ellipticity factor.
struct Probe {
    value: f64,
    slope: f64,
    guard: f64,
}

fn probe<F>(eval: &mut F, x: f64) -> Result<Probe>
where
    F: FnMut(f64) -> Result<Probe>,
{
    let p = eval(x)?;
    if !(p.guard > 0.0) {
        return Err(Error::EllipticityLost { value: p.guard });
    }
    Ok(p)
}

/// Newton from `x`. If it does not converge and `jump > 0`, the residual is
/// treated as a monotone function with a jump of at most `jump`: its sign
/// change is bracketed and bisected to adjacent floats, and accepted when the
/// leftover residual is within the jump.
fn newton<F>(x: f64, tol: f64, max_iter: usize, jump: f64, mut eval: F) -> Result<NewtonOutcome>
where
    F: FnMut(f64) -> Result<Probe>,
{
    let mut x = x;
    let mut last = f64::NAN;
    let mut last_x = x;
    for iterations in 0..=max_iter {
        let p = probe(&mut eval, x)?;
        last = p.value;
        last_x = x;
        if p.value.abs() <= tol {
            return Ok(NewtonOutcome {
                root: x,
                iterations,
                residual: p.value,
            });
        }
        if iterations == max_iter {
            break;
        }
        let next = x - p.value / p.slope;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    let diverged = Error::NewtonDivergence {
        iterations: max_iter,
        residual: last.abs(),
    };
    if !(jump > 0.0) {
        return Err(diverged);
    }
    match bracket_sign_change(last_x, &mut eval)? {
        Some((root, value, extra)) if value.abs() <= jump + tol => Ok(NewtonOutcome {
            root,
            iterations: max_iter + extra,
            residual: value,
        }),
        _ => Err(diverged),
    }
}

/// Expands from `x0` toward the sign change of a monotone residual, then
/// bisects to adjacent floats. Returns the endpoint with the smaller
/// residual and the number of evaluations used.
fn bracket_sign_change<F>(x0: f64, eval: &mut F) -> Result<Option<(f64, f64, usize)>>
where
    F: FnMut(f64) -> Result<Probe>,
{
    let p0 = probe(eval, x0)?;
    let mut evals = 1;
    if p0.value == 0.0 {
        return Ok(Some((x0, 0.0, evals)));
    }
    let dir = if (p0.value > 0.0) == (p0.slope > 0.0) {
        -1.0
    } else {
        1.0
    };
    let mut step = (p0.value / p0.slope)
        .abs()
        .max(x0.abs() * 1e-12)
        .max(f64::MIN_POSITIVE);
    let (mut a, mut fa) = (x0, p0.value);
    let mut bracket = None;
    for _ in 0..200 {
        let b = a + dir * step;
        if !b.is_finite() {
            return Ok(None);
        }
        let fb = probe(eval, b)?.value;
        evals += 1;
        if fb == 0.0 || fb.signum() != fa.signum() {
            bracket = Some((a, fa, b, fb));
            break;
        }
        (a, fa) = (b, fb);
        step *= 2.0;
    }
    let Some((mut lo, mut flo, mut hi, mut fhi)) = bracket else {
        return Ok(None);
    };
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi || fhi == 0.0 {
            break;
        }
        let fm = probe(eval, mid)?.value;
        evals += 1;
        if fm.signum() == flo.signum() {
            (lo, flo) = (mid, fm);
        } else {
            (hi, fhi) = (mid, fm);
        }
    }
    Ok(Some(if flo.abs() <= fhi.abs() {
        (lo, flo, evals)
    } else {
        (hi, fhi, evals)
    }))
}

/// Residual tolerance relative to the curvature scale, capped at `newton_tol`.
fn scaled_tol(newton_tol: f64, kappa2: f64) -> f64 {
    newton_tol * kappa2.abs().clamp(f64::MIN_POSITIVE, 1.0)
}

/// `t_ss` for the minimal case `f = 0`, where `Q` is affine in `w`.
pub fn minimal_t_ss(warp: &WarpingFunction, u: f64, v: f64, z: f64) -> f64 {
    let h_rho = warp.h_rho(u);
    -v * (z / u + 2.0 * h_rho * z)
}

/// Solves `Q(u, v, z, w) = 0` for `w = t_ss` by Newton from `w_guess`.
pub fn newton_highest_derivative(
    warp: &WarpingFunction,
    f: &EllipticFunction,
    u: f64,
    v: f64,
    z: f64,
    w_guess: f64,
    opts: &SolverOptions,
) -> Result<NewtonOutcome> {
    let eh = warp.h(u).exp();
    let kappa2 = eh * z / u;
    newton(
        w_guess,
        scaled_tol(opts.newton_tol, kappa2),
        opts.newton_max_iter,
        f.floor_jump(),
        |w| {
            let (value, slope) = arc_residual_q(warp, f, u, v, z, w)?;
            // dQ/dw = (e^h / 2v)(1 - 2 beta f'(beta^2)); recover the bracket.
            let guard = slope * 2.0 * v / eh;
            Ok(Probe {
                value,
                slope,
                guard,
            })
        },
    )
}

/// `rho_tt` for the minimal case `f = 0` in graph form.
pub fn minimal_rho_tt(warp: &WarpingFunction, g: &GraphState) -> f64 {
    let (h, h_rho) = warp.eval(g.rho);
    let e2h = (2.0 * h).exp();
    let a = e2h + g.rho_t * g.rho_t;
    e2h * h_rho + 2.0 * h_rho * g.rho_t * g.rho_t + a / g.rho
}

/// Solves the graph-form equation for `rho_tt` by Newton from `guess`.
pub fn newton_graph_rho_tt(
    warp: &WarpingFunction,
    f: &EllipticFunction,
    g: &GraphState,
    guess: f64,
    opts: &SolverOptions,
) -> Result<NewtonOutcome> {
    let eh = warp.h(g.rho).exp();
    let a = eh * eh + g.rho_t * g.rho_t;
    let kappa2 = eh / (g.rho * a.sqrt());
    let scale = -0.5 * eh / (a * a.sqrt());
    newton(
        guess,
        scaled_tol(opts.newton_tol, kappa2),
        opts.newton_max_iter,
        f.floor_jump(),
        |rtt| {
            let (value, slope) = graph_residual_with_derivative(warp, f, g, rtt)?;
            Ok(Probe {
                value,
                slope,
                guard: slope / scale,
            })
        },
    )
}

/// Solves `(k1 + k2)/2 = f(((k1 - k2)/2)^2)` for `k1` given `k2`.
///
/// This is the closure used where the curve is vertical in the `rho`
/// direction (`rho_s = 0`), where `Q` is singular.
pub fn newton_kappa1(
    f: &EllipticFunction,
    kappa2: f64,
    opts: &SolverOptions,
) -> Result<NewtonOutcome> {
    newton(
        -kappa2,
        scaled_tol(opts.newton_tol, kappa2),
        opts.newton_max_iter,
        f.floor_jump(),
        |k1| {
            let beta = 0.5 * (k1 - kappa2);
            let (fv, fp) = f.eval_with_derivative(beta * beta)?;
            let guard = 1.0 - 2.0 * beta * fp;
            Ok(Probe {
                value: 0.5 * (k1 + kappa2) - fv,
                slope: 0.5 * guard,
                guard,
            })
        },
    )
}
