mod common;

use common::*;

#[test]
fn quadrature_reproduces_frozen_values() {
    let cases = [
        (0.0, 1.0, T0_MINIMAL_RHO0_1),
        (0.5, 1.0, T0_HALF_SQRT_RHO0_1),
        (0.25, 1.0, T0_QUARTER_SQRT_RHO0_1),
        (0.0, 0.5, T0_MINIMAL_RHO0_HALF),
        (0.0, 2.0, T0_MINIMAL_RHO0_2),
    ];
    for (alpha, rho0, frozen) in cases {
        let q = t0_quadrature(alpha, rho0);
        assert!(
            (q - frozen).abs() < 1e-12,
            "alpha {alpha} rho0 {rho0}: {q} vs {frozen}"
        );
    }
}

#[test]
fn alpha_one_limit_is_inverse_e() {
    // c = 0: rho_t = e^rho sqrt(e^{2 rho - 2} - 1), t0 = 1/e in closed form
    assert!((t0_quadrature(1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-12);
}
