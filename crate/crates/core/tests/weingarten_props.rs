use ewmt_core::weingarten::{ELLIPTICITY_GRID, ELLIPTICITY_T_MAX};
use ewmt_core::EllipticFunction;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn family() -> impl Strategy<Value = EllipticFunction> {
    prop_oneof![
        Just(EllipticFunction::zero()),
        (0.0..0.99f64).prop_map(|a| EllipticFunction::sqrt_scaled(a).unwrap()),
        (-0.99..0.0f64).prop_map(|a| EllipticFunction::sqrt_scaled(a).unwrap()),
        (-0.004..0.004f64, -5e-8..5e-8f64)
            .prop_map(|(c1, c2)| EllipticFunction::polynomial(vec![0.0, c1, c2]).unwrap()),
    ]
}

proptest! {
    #[test]
    fn minimal_type_and_bounded_by_the_root(f in family(), t in 0.0..1e4f64) {
        prop_assert_eq!(f.f_eval(0.0).unwrap(), 0.0);
        let v = f.f_eval(t).unwrap();
        prop_assert!(v * v <= t * (1.0 + 1e-12), "f({t})^2 = {}", v * v);
    }

    #[test]
    fn elliptic_families_pass_the_gate(f in family()) {
        let margin = f.ensure_elliptic().unwrap();
        prop_assert!(margin < 1.0);
    }
}

/// `x -+ f(x^2)` on `[-sqrt(t_max), sqrt(t_max)]`, the same range of `t` the margin grid covers.
fn monotone_on_shared_range(f: &EllipticFunction) -> bool {
    let x_max = ELLIPTICITY_T_MAX.sqrt();
    f.monotone_check(-x_max, x_max, 4001).unwrap()
}

fn elliptic(f: &EllipticFunction) -> bool {
    f.ellipticity_margin(ELLIPTICITY_T_MAX, ELLIPTICITY_GRID)
        .unwrap()
        < 1.0
}

#[test]
fn monotone_iff_elliptic_on_generated_polynomials() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = Vec::new();
    for _ in 0..10 {
        let c1 = rng.gen_range(-0.004..0.004);
        let c2 = rng.gen_range(-5e-8..5e-8);
        cases.push((vec![0.0, c1, c2], true));
    }
    for _ in 0..10 {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c1 = sign * rng.gen_range(0.02..1.0);
        let c2 = rng.gen_range(-5e-8..5e-8);
        cases.push((vec![0.0, c1, c2], false));
    }
    for (coefficients, admissible) in cases {
        let f = EllipticFunction::polynomial(coefficients.clone()).unwrap();
        assert_eq!(elliptic(&f), admissible, "{coefficients:?}");
        assert_eq!(monotone_on_shared_range(&f), admissible, "{coefficients:?}");
    }
}

#[test]
fn gate_on_the_square_root_family() {
    let half = EllipticFunction::sqrt_scaled(0.5).unwrap();
    let margin = half.ensure_elliptic().unwrap();
    assert!((margin - 0.25).abs() < 1e-12);
    let one = EllipticFunction::sqrt_scaled(1.0).unwrap();
    let err = one.ensure_elliptic().unwrap_err();
    assert!(err.to_string().contains("not elliptic"));
    assert!(monotone_on_shared_range(&half));
}
