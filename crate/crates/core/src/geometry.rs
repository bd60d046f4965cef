//! The warped product `R^2 x_h R` in polar coordinates `(rho, omega, t)`.
//!
//! The metric is `g = d rho^2 + rho^2 d omega^2 + e^{2h(rho)} dt^2`, block
//! diagonal in the coordinate frame `{d_rho, d_omega, d_t}`. Only radial
//! warping functions are supported.

use std::fmt;

use crate::error::{Error, Result};

/// Radial warping function `h(rho)` together with its derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpingFunction {
    /// `h(rho) = c`.
    Constant(f64),
    /// `h(rho) = rho`.
    Linear,
    /// `h(rho) = slope * rho + intercept`.
    Affine { slope: f64, intercept: f64 },
    /// `h(rho) = sum_k c[k] rho^k`.
    Polynomial(Vec<f64>),
}

impl WarpingFunction {
    pub fn flat() -> Self {
        WarpingFunction::Constant(0.0)
    }

    pub fn family(&self) -> &'static str {
        match self {
            WarpingFunction::Constant(_) => "constant",
            WarpingFunction::Linear => "linear",
            WarpingFunction::Affine { .. } => "affine",
            WarpingFunction::Polynomial(_) => "polynomial",
        }
    }

    pub fn coefficients(&self) -> Vec<f64> {
        match self {
            WarpingFunction::Constant(c) => vec![*c],
            WarpingFunction::Linear => vec![],
            WarpingFunction::Affine { slope, intercept } => vec![*slope, *intercept],
            WarpingFunction::Polynomial(c) => c.clone(),
        }
    }

    /// Builds a warping function from a family name and its coefficient list
    /// (the same layout [`coefficients`](Self::coefficients) returns).
    pub fn from_parts(family: &str, coefficients: &[f64]) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "warping coefficients must be finite".into(),
            ));
        }
        let arity = |n: usize| -> Result<()> {
            if coefficients.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "warping family '{family}' takes {n} coefficient(s), got {}",
                    coefficients.len()
                )))
            }
        };
        match family {
            "constant" => {
                if coefficients.is_empty() {
                    return Ok(WarpingFunction::flat());
                }
                arity(1)?;
                Ok(WarpingFunction::Constant(coefficients[0]))
            }
            "linear" => {
                arity(0)?;
                Ok(WarpingFunction::Linear)
            }
            "affine" => {
                arity(2)?;
                Ok(WarpingFunction::Affine {
                    slope: coefficients[0],
                    intercept: coefficients[1],
                })
            }
            "polynomial" => {
                if coefficients.is_empty() {
                    return Err(Error::InvalidParameter(
                        "polynomial warping needs at least one coefficient".into(),
                    ));
                }
                Ok(WarpingFunction::Polynomial(coefficients.to_vec()))
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown warping family '{other}'"
            ))),
        }
    }

    /// Returns `(h(rho), h_rho(rho))`.
    pub fn eval(&self, rho: f64) -> (f64, f64) {
        match self {
            WarpingFunction::Constant(c) => (*c, 0.0),
            WarpingFunction::Linear => (rho, 1.0),
            WarpingFunction::Affine { slope, intercept } => (slope * rho + intercept, *slope),
            WarpingFunction::Polynomial(c) => {
                // Horner for value and derivative together.
                let mut value = 0.0;
                let mut deriv = 0.0;
                for &ck in c.iter().rev() {
                    deriv = deriv * rho + value;
                    value = value * rho + ck;
                }
                (value, deriv)
            }
        }
    }

    pub fn h(&self, rho: f64) -> f64 {
        self.eval(rho).0
    }

    pub fn h_rho(&self, rho: f64) -> f64 {
        self.eval(rho).1
    }
}

impl fmt::Display for WarpingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WarpingFunction::Constant(c) => write!(f, "h={c}"),
            WarpingFunction::Linear => write!(f, "h=rho"),
            WarpingFunction::Affine { slope, intercept } => {
                write!(f, "h={slope}*rho+{intercept}")
            }
            WarpingFunction::Polynomial(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .map(|(k, ck)| match k {
                        0 => format!("{ck}"),
                        1 => format!("{ck}*rho"),
                        _ => format!("{ck}*rho^{k}"),
                    })
                    .collect();
                write!(f, "h={}", terms.join("+"))
            }
        }
    }
}

/// Coordinate directions of the natural frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Rho = 0,
    Omega = 1,
    T = 2,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::Rho, Coord::Omega, Coord::T];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub rho: f64,
    pub omega: f64,
    pub t: f64,
}

impl Point {
    pub fn new(rho: f64, omega: f64, t: f64) -> Self {
        Point { rho, omega, t }
    }

    /// Angle reduced to `[0, 2 pi)`.
    pub fn omega_mod(&self) -> f64 {
        self.omega.rem_euclid(std::f64::consts::TAU)
    }
}

/// Components on `d_rho, d_omega, d_t` at some point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector(pub [f64; 3]);

impl TangentVector {
    pub fn new(a_rho: f64, a_omega: f64, a_t: f64) -> Self {
        TangentVector([a_rho, a_omega, a_t])
    }

    pub fn basis(c: Coord) -> Self {
        let mut v = [0.0; 3];
        v[c as usize] = 1.0;
        TangentVector(v)
    }

    pub fn d_rho() -> Self {
        Self::basis(Coord::Rho)
    }

    pub fn d_omega() -> Self {
        Self::basis(Coord::Omega)
    }

    pub fn d_t() -> Self {
        Self::basis(Coord::T)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
}

/// `gamma[i][j][k]` is the coefficient of `X_k` in `nabla_{X_i} X_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConnectionCoefficients {
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl ConnectionCoefficients {
    pub fn get(&self, i: Coord, j: Coord, k: Coord) -> f64 {
        self.gamma[i as usize][j as usize][k as usize]
    }

    /// `nabla_Y X` for constant-coefficient fields `X`, `Y`.
    pub fn covariant(&self, y: &TangentVector, x: &TangentVector) -> TangentVector {
        let mut out = [0.0; 3];
        for (i, yi) in y.0.iter().enumerate() {
            for (j, xj) in x.0.iter().enumerate() {
                let w = yi * xj;
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.gamma[i][j][k];
                }
            }
        }
        TangentVector(out)
    }
}

/// `g(u, v) = u1 v1 + rho^2 u2 v2 + e^{2h(rho)} u3 v3`.
pub fn metric_eval(w: &WarpingFunction, p: &Point, u: &TangentVector, v: &TangentVector) -> f64 {
    let (u, v) = (u.0, v.0);
    let fiber = (2.0 * w.h(p.rho)).exp();
    u[0] * v[0] + p.rho * p.rho * (u[1] * v[1]) + fiber * (u[2] * v[2])
}

/// Levi-Civita connection in the coordinate frame.
///
/// Nonzero entries:
/// `nabla_rho d_omega = nabla_omega d_rho = d_omega / rho`,
/// `nabla_rho d_t = nabla_t d_rho = h_rho d_t`,
/// `nabla_omega d_omega = -rho d_rho`,
/// `nabla_t d_t = -e^{2h} h_rho d_rho`.
pub fn christoffel(w: &WarpingFunction, p: &Point) -> Result<ConnectionCoefficients> {
    if p.rho <= 0.0 || !p.rho.is_finite() {
        return Err(Error::AxisSingularity { rho: p.rho });
    }
    let (h, h_rho) = w.eval(p.rho);
    let (r, o, t) = (
        Coord::Rho as usize,
        Coord::Omega as usize,
        Coord::T as usize,
    );
    let mut g = [[[0.0; 3]; 3]; 3];
    g[o][r][o] = 1.0 / p.rho;
    g[r][o][o] = 1.0 / p.rho;
    g[t][r][t] = h_rho;
    g[r][t][t] = h_rho;
    g[o][o][r] = -p.rho;
    g[t][t][r] = -(2.0 * h).exp() * h_rho;
    Ok(ConnectionCoefficients { gamma: g })
}

/// Candidate Killing fields; all have constant coordinate components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KillingCandidate {
    DT,
    DOmega,
    DRho,
}

impl KillingCandidate {
    pub fn field(self) -> TangentVector {
        match self {
            KillingCandidate::DT => TangentVector::d_t(),
            KillingCandidate::DOmega => TangentVector::d_omega(),
            KillingCandidate::DRho => TangentVector::d_rho(),
        }
    }
}

/// `g(nabla_Y X, Z) + g(nabla_Z X, Y)`, which vanishes identically iff `X` is Killing.
///
/// Summed as `Y^i X^j Z^k (G_ijk + G_kji)` with the lowered symbols
/// `G_ijk = Gamma_ij^k g_kk`, so cancelling pairs cancel before they are scaled by `e^{2h}`.
pub fn killing_residual(
    w: &WarpingFunction,
    field: KillingCandidate,
    p: &Point,
    y: &TangentVector,
    z: &TangentVector,
) -> Result<f64> {
    let gamma = christoffel(w, p)?;
    let x = field.field().0;
    let diag = [1.0, p.rho * p.rho, (2.0 * w.h(p.rho)).exp()];
    let lowered = |i: usize, j: usize, k: usize| gamma.gamma[i][j][k] * diag[k];
    let mut total = 0.0;
    for (j, &xj) in x.iter().enumerate().filter(|(_, &c)| c != 0.0) {
        for i in 0..3 {
            for k in 0..3 {
                let pair = lowered(i, j, k) + lowered(k, j, i);
                total += y.0[i] * xj * z.0[k] * pair;
            }
        }
    }
    Ok(total)
}
