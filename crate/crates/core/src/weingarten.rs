//! The Weingarten relation `H = f(H^2 - K)` of minimal type.
//!
//! `f` must satisfy `f(0) = 0` and the ellipticity condition
//! `4 t f'(t)^2 < 1` on `(-epsilon, inf)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ExtendedReal;

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_EVAL_FLOOR: f64 = 1e-14;

/// Grid used by [`EllipticFunction::ensure_elliptic`].
pub const ELLIPTICITY_T_MAX: f64 = 1e4;
pub const ELLIPTICITY_GRID: usize = 200;

/// Magnitude beyond which a monotone probe sequence is reported as infinite.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum EllipticFamily {
    /// `f = 0`: minimal surfaces.
    Zero,
    /// `f(t) = alpha sqrt(t)` for `t >= eval_floor`, zero below.
    SqrtScaled { alpha: f64 },
    /// `f(t) = sum_k c[k] t^k` with `c[0] = 0`.
    CustomPolynomial(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticFunction {
    family: EllipticFamily,
    epsilon: f64,
    eval_floor: f64,
}

impl EllipticFunction {
    pub fn new(family: EllipticFamily, epsilon: f64, eval_floor: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weingarten epsilon must be positive, got {epsilon}"
            )));
        }
        if !(eval_floor >= 0.0 && eval_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weingarten eval_floor must be non-negative, got {eval_floor}"
            )));
        }
        match &family {
            EllipticFamily::Zero => {}
            EllipticFamily::SqrtScaled { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::InvalidParameter("alpha must be finite".into()));
                }
            }
            EllipticFamily::CustomPolynomial(c) => {
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "polynomial coefficients must be finite".into(),
                    ));
                }
                if c.first().is_some_and(|&c0| c0 != 0.0) {
                    return Err(Error::InvalidParameter(
                        "f(0) must vanish (minimal type): constant coefficient is nonzero".into(),
                    ));
                }
            }
        }
        Ok(EllipticFunction {
            family,
            epsilon,
            eval_floor,
        })
    }

    pub fn zero() -> Self {
        EllipticFunction {
            family: EllipticFamily::Zero,
            epsilon: DEFAULT_EPSILON,
            eval_floor: DEFAULT_EVAL_FLOOR,
        }
    }

    pub fn sqrt_scaled(alpha: f64) -> Result<Self> {
        Self::new(
            EllipticFamily::SqrtScaled { alpha },
            DEFAULT_EPSILON,
            DEFAULT_EVAL_FLOOR,
        )
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        Self::new(
            EllipticFamily::CustomPolynomial(coefficients),
            DEFAULT_EPSILON,
            DEFAULT_EVAL_FLOOR,
        )
    }

    pub fn family(&self) -> &EllipticFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            EllipticFamily::Zero => "zero",
            EllipticFamily::SqrtScaled { .. } => "sqrt_scaled",
            EllipticFamily::CustomPolynomial(_) => "custom_polynomial",
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eval_floor(&self) -> f64 {
        self.eval_floor
    }

    pub fn is_zero(&self) -> bool {
        match &self.family {
            EllipticFamily::Zero => true,
            EllipticFamily::SqrtScaled { alpha } => *alpha == 0.0,
            EllipticFamily::CustomPolynomial(c) => c.iter().all(|&x| x == 0.0),
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t > -self.epsilon {
            Ok(())
        } else {
            Err(Error::DomainError {
                t,
                epsilon: self.epsilon,
            })
        }
    }

    /// `(f(t), f'(t))` without the domain check.
    fn eval_unchecked(&self, t: f64) -> (f64, f64) {
        match &self.family {
            EllipticFamily::Zero => (0.0, 0.0),
            EllipticFamily::SqrtScaled { alpha } => {
                if t < self.eval_floor || t <= 0.0 {
                    (0.0, 0.0)
                } else {
                    let r = t.sqrt();
                    (alpha * r, alpha / (2.0 * r))
                }
            }
            EllipticFamily::CustomPolynomial(c) => {
                let mut value = 0.0;
                let mut deriv = 0.0;
                for &ck in c.iter().rev() {
                    deriv = deriv * t + value;
                    value = value * t + ck;
                }
                (value, deriv)
            }
        }
    }

    pub fn f_eval(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t).0)
    }

    pub fn f_prime(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t).1)
    }

    /// `(f(t), f'(t))` with the domain check.
    pub fn eval_with_derivative(&self, t: f64) -> Result<(f64, f64)> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t))
    }

    /// Size of the jump of `f` at `eval_floor`; zero for continuous families.
    pub fn floor_jump(&self) -> f64 {
        match &self.family {
            EllipticFamily::SqrtScaled { alpha } if self.eval_floor > 0.0 => {
                alpha.abs() * self.eval_floor.sqrt()
            }
            _ => 0.0,
        }
    }

    /// Range `[lo, hi]` of the filled-in graph of `f` at `t`. It is a single
    /// point except where `t` sits on the floor jump (within `1e-9` relative).
    pub fn f_hull(&self, t: f64) -> Result<(f64, f64)> {
        let v = self.f_eval(t)?;
        let jump = self.floor_jump();
        if jump > 0.0 && (t - self.eval_floor).abs() <= 1e-9 * self.eval_floor {
            let other = self.eval_unchecked(self.eval_floor).0;
            let (a, b) = (0.0f64, other);
            return Ok((a.min(b), a.max(b)));
        }
        Ok((v, v))
    }

    /// Sup of `4 t f'(t)^2` over a log grid of `n` points in `(eval_floor, t_max]`
    /// and a linear grid of `n` points in `(-epsilon + 1e-6, 0)`.
    pub fn ellipticity_margin(&self, t_max: f64, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "ellipticity grid needs n >= 2, got {n}"
            )));
        }
        if !(t_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ellipticity grid needs t_max > 0, got {t_max}"
            )));
        }
        let lower = self.eval_floor.max(DEFAULT_EVAL_FLOOR);
        let ratio = (t_max / lower).ln();
        let mut sup = f64::NEG_INFINITY;
        for i in 1..=n {
            let t = lower * (ratio * i as f64 / n as f64).exp();
            let fp = self.f_prime(t)?;
            sup = sup.max(4.0 * t * fp * fp);
        }
        let neg_start = -self.epsilon + 1e-6;
        if neg_start < 0.0 {
            for i in 0..n {
                let t = neg_start * (1.0 - i as f64 / n as f64);
                let fp = self.f_prime(t)?;
                sup = sup.max(4.0 * t * fp * fp);
            }
        }
        Ok(sup)
    }

    /// Rejects `f` unless the default-grid margin is strictly below one.
    pub fn ensure_elliptic(&self) -> Result<f64> {
        let margin = self.ellipticity_margin(ELLIPTICITY_T_MAX, ELLIPTICITY_GRID)?;
        if margin < 1.0 {
            Ok(margin)
        } else {
            Err(Error::InvalidParameter(format!(
                "f is not elliptic: sup 4t f'(t)^2 = {margin} >= 1"
            )))
        }
    }

    /// True iff `x - f(x^2)` and `x + f(x^2)` are strictly increasing on a
    /// uniform grid of `n` points in `[x_min, x_max]` and both vanish at zero.
    pub fn monotone_check(&self, x_min: f64, x_max: f64, n: usize) -> Result<bool> {
        if n < 3 || !(x_max > x_min) {
            return Err(Error::InvalidParameter(format!(
                "monotone grid needs n >= 3 and x_max > x_min (n={n}, [{x_min}, {x_max}])"
            )));
        }
        let f0 = self.f_eval(0.0)?;
        if f0.abs() > 1e-12 {
            return Ok(false);
        }
        let mut prev: Option<(f64, f64)> = None;
        let mut increasing = true;
        for i in 0..n {
            let x = x_min + (x_max - x_min) * i as f64 / (n - 1) as f64;
            let fx = self.f_eval(x * x)?;
            let (g, g_bar) = (x - fx, x + fx);
            if let Some((pg, pgb)) = prev {
                if g <= pg || g_bar <= pgb {
                    increasing = false;
                }
            }
            prev = Some((g, g_bar));
        }
        Ok(increasing)
    }

    /// Probes `r - f(r^2)` along `r = -+r_probe 2^k`, `k = 0..=20`.
    pub fn asymptotic_limits(&self, r_probe: f64) -> (ExtendedReal, ExtendedReal) {
        let probe = |sign: f64| -> ExtendedReal {
            let values: Vec<f64> = (0..=20)
                .map(|k| {
                    let r = sign * r_probe * f64::powi(2.0, k);
                    r - self.eval_unchecked(r * r).0
                })
                .collect();
            let monotone = values.windows(2).all(|w| sign * (w[1] - w[0]) > 0.0);
            let last = *values.last().expect("21 probes");
            if monotone && last.abs() > DIVERGENCE_THRESHOLD {
                if last > 0.0 {
                    ExtendedReal::PosInf
                } else {
                    ExtendedReal::NegInf
                }
            } else {
                ExtendedReal::Finite(last)
            }
        };
        (probe(-1.0), probe(1.0))
    }
}

impl fmt::Display for EllipticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            EllipticFamily::Zero => write!(f, "f=0"),
            EllipticFamily::SqrtScaled { alpha } => write!(f, "f={alpha}*sqrt(t)"),
            EllipticFamily::CustomPolynomial(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, ck)| {
                        if k == 1 {
                            format!("{ck}*t")
                        } else {
                            format!("{ck}*t^{k}")
                        }
                    })
                    .collect();
                write!(f, "f={}", terms.join("+"))
            }
        }
    }
}
