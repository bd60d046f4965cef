//! Dormand-Prince 5(4) with FSAL and local extrapolation.
//!
//! The observer sees every accepted step and may project the state back
//! onto a constraint manifold (the FSAL stage is then recomputed) or stop
//! the integration.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b5 - b4
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    /// The state was modified in place; the derivative must be recomputed.
    Projected,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    /// Final value of the independent variable.
    pub end: f64,
    /// True if the observer stopped the run before the span end.
    pub stopped: bool,
    pub stats: StepStats,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let sum: f64 = v.iter().zip(scale).map(|(x, s)| (x / s) * (x / s)).sum();
    (sum / N as f64).sqrt()
}

/// Hairer's starting step heuristic.
fn initial_step<const N: usize, F>(
    rhs: &mut F,
    s0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    ctrl: &StepControl,
    stats: &mut StepStats,
) -> Result<f64>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut scale = [0.0; N];
    for i in 0..N {
        scale[i] = ctrl.abs_tol + ctrl.rel_tol * y0[i].abs();
    }
    let d0 = rms_norm(y0, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(ctrl.max_step);
    let y1 = axpy(y0, dir * h0, &[(1.0, f0)]);
    stats.rhs_evals += 1;
    let f1 = rhs(s0 + dir * h0, &y1)?;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms_norm(&diff, &scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(ctrl.max_step))
}

/// Integrates `y' = rhs(s, y)` from `s0` toward `s_end` (either direction).
///
/// A stage whose right-hand side fails is treated like a rejected step; the
/// error surfaces only if the step then shrinks below `min_step`.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    s0: f64,
    y0: [f64; N],
    s_end: f64,
    ctrl: &StepControl,
    mut observer: O,
) -> Result<Outcome>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(f64, &mut [f64; N]) -> Result<Flow>,
{
    let mut stats = StepStats::default();
    let span = s_end - s0;
    if span == 0.0 {
        return Ok(Outcome {
            end: s0,
            stopped: false,
            stats,
        });
    }
    let dir = span.signum();
    let mut s = s0;
    let mut y = y0;
    stats.rhs_evals += 1;
    let mut k1 = rhs(s, &y)?;
    let mut h = initial_step(&mut rhs, s, &y, &k1, dir, ctrl, &mut stats)?;
    let mut last_rejected = false;
    let mut last_error: Option<Error> = None;

    loop {
        let remaining = (s_end - s) * dir;
        if remaining <= 0.0 {
            break;
        }
        let mut step = h.min(ctrl.max_step);
        let finishing = step >= remaining;
        if finishing {
            step = remaining;
        } else if step < ctrl.min_step {
            return Err(last_error.unwrap_or(Error::StepUnderflow { at: s, step }));
        }
        let hs = dir * step;

        let trial = (|| -> Result<([f64; N], [f64; N], [f64; N])> {
            let k2 = rhs(s + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = rhs(s + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs(
                s + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = rhs(
                s + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs(
                s + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y_new = axpy(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = rhs(s + hs, &y_new)?;
            let mut err = [0.0; N];
            for i in 0..N {
                err[i] = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            Ok((y_new, k7, err))
        })();
        stats.rhs_evals += 6;

        let (y_new, k7, err) = match trial {
            Ok(v) => v,
            Err(e) => {
                stats.rejected += 1;
                last_error = Some(e);
                last_rejected = true;
                h = step * 0.25;
                if h < ctrl.min_step {
                    return Err(last_error.take().expect("just set"));
                }
                continue;
            }
        };

        let mut scale = [0.0; N];
        for i in 0..N {
            scale[i] = ctrl.abs_tol + ctrl.rel_tol * y[i].abs().max(y_new[i].abs());
        }
        let err_norm = rms_norm(&err, &scale);
        if !err_norm.is_finite() {
            stats.rejected += 1;
            last_rejected = true;
            h = step * FAC_MIN;
            continue;
        }

        if err_norm <= 1.0 {
            stats.accepted += 1;
            s = if finishing { s_end } else { s + hs };
            y = y_new;
            k1 = k7;
            last_error = None;
            let mut fac = if err_norm == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err_norm.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            if !finishing {
                h = step * fac;
            }
            match observer(s, &mut y)? {
                Flow::Continue => {}
                Flow::Projected => {
                    stats.rhs_evals += 1;
                    k1 = rhs(s, &y)?;
                }
                Flow::Stop => {
                    return Ok(Outcome {
                        end: s,
                        stopped: true,
                        stats,
                    })
                }
            }
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h = step * (SAFETY * err_norm.powf(-0.2)).clamp(FAC_MIN, 1.0);
        }
    }
    Ok(Outcome {
        end: s,
        stopped: false,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl(tol: f64) -> StepControl {
        StepControl {
            rel_tol: tol,
            abs_tol: tol,
            max_step: f64::INFINITY,
            min_step: 1e-14,
        }
    }

    #[test]
    fn exponential_decay() {
        let mut last = (0.0, 0.0);
        let out = integrate(
            |_, y: &[f64; 1]| Ok([-y[0]]),
            0.0,
            [1.0],
            3.0,
            &ctrl(1e-10),
            |s, y| {
                last = (s, y[0]);
                Ok(Flow::Continue)
            },
        )
        .unwrap();
        assert_eq!(out.end, 3.0);
        assert_eq!(last.0, 3.0);
        assert!((last.1 - (-3.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_backward() {
        let mut last = [0.0; 2];
        integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            -2.0,
            &ctrl(1e-11),
            |_, y| {
                last = *y;
                Ok(Flow::Continue)
            },
        )
        .unwrap();
        assert!((last[0] - (-2.0f64).sin()).abs() < 1e-9);
        assert!((last[1] - (-2.0f64).cos()).abs() < 1e-9);
    }

    #[test]
    fn observer_stop_and_max_step() {
        let mut steps = 0;
        let c = StepControl {
            max_step: 0.1,
            ..ctrl(1e-6)
        };
        let out = integrate(
            |_, _: &[f64; 1]| Ok([1.0]),
            0.0,
            [0.0],
            10.0,
            &c,
            |s, _| {
                steps += 1;
                Ok(if s > 1.0 { Flow::Stop } else { Flow::Continue })
            },
        )
        .unwrap();
        assert!(out.stopped);
        assert!(out.end > 1.0 && out.end <= 1.1 + 1e-12);
        assert!(steps >= 10);
    }

    #[test]
    fn blowup_underflows() {
        // y' = y^2, y(0) = 1 blows up at s = 1
        let err = integrate(
            |_, y: &[f64; 1]| Ok([y[0] * y[0]]),
            0.0,
            [1.0],
            2.0,
            &ctrl(1e-10),
            |_, _| Ok(Flow::Continue),
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::StepUnderflow { at, .. } if (at - 1.0).abs() < 1e-3),
            "{err:?}"
        );
    }

    #[test]
    fn failing_rhs_region_is_reported() {
        let err = integrate(
            |s, y: &[f64; 1]| {
                if s > 0.5 {
                    Err(Error::DegenerateState("wall"))
                } else {
                    Ok([y[0]])
                }
            },
            0.0,
            [1.0],
            1.0,
            &ctrl(1e-8),
            |_, _| Ok(Flow::Continue),
        )
        .unwrap_err();
        assert_eq!(err, Error::DegenerateState("wall"));
    }
}
