//! Independent reference values for the solver tests.
#![allow(dead_code)]

/// Asymptotic height for `h(rho) = rho` and `f = alpha sqrt(t)` from the
/// first integral of the graph equation. With `kappa1 = -c kappa2`,
/// `c = (1 - alpha)/(1 + alpha)`, and `G(rho) = 2 rho + 2c ln rho`,
///
/// `rho_t = e^rho e^{dG/2} sqrt(1 - e^{-dG})`, `dG = G(rho) - G(rho0)`,
///
/// so `t0 = int_{rho0}^inf d rho / rho_t`. Substituting `rho = rho0 + u^2`
/// removes the endpoint singularity; composite Simpson on `u in [0, 8]`.
pub fn t0_quadrature(alpha: f64, rho0: f64) -> f64 {
    let c = (1.0 - alpha) / (1.0 + alpha);
    let integrand = |u: f64| -> f64 {
        if u == 0.0 {
            let g_prime = 2.0 + 2.0 * c / rho0;
            return 2.0 / (rho0.exp() * g_prime.sqrt());
        }
        let u2 = u * u;
        let rho = rho0 + u2;
        let dg = 2.0 * u2 + 2.0 * c * (u2 / rho0).ln_1p();
        let rho_t = rho.exp() * (0.5 * dg).exp() * (-(-dg).exp_m1()).sqrt();
        2.0 * u / rho_t
    };
    let (a, b, n) = (0.0, 8.0, 40_000usize);
    let h = (b - a) / n as f64;
    let mut sum = integrand(a) + integrand(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Quadrature values of the same integral, computed once to 30 digits with an
/// arbitrary-precision library and rounded to the nearest double.
pub const T0_MINIMAL_RHO0_1: f64 = 0.23333664126418094;
pub const T0_HALF_SQRT_RHO0_1: f64 = 0.30815983061600744;
pub const T0_QUARTER_SQRT_RHO0_1: f64 = 0.2731029055454766;
pub const T0_MINIMAL_RHO0_HALF: f64 = 0.29674389691869774;
pub const T0_MINIMAL_RHO0_2: f64 = 0.10331075177309122;

/// Flat catenary in arc length from its waist: `rho = sqrt(1 + s^2)`,
/// `t = asinh s`.
pub fn catenary_arc(s: f64) -> (f64, f64) {
    ((1.0 + s * s).sqrt(), s.asinh())
}
