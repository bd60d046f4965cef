use ewmt_core::geometry::{
    christoffel, killing_residual, metric_eval, Coord, KillingCandidate, Point, TangentVector,
    WarpingFunction,
};
use proptest::prelude::*;

fn warp() -> impl Strategy<Value = WarpingFunction> {
    prop_oneof![
        Just(WarpingFunction::Linear),
        Just(WarpingFunction::flat()),
        (-1.0..1.0f64).prop_map(WarpingFunction::Constant),
        (-1.0..1.5f64, -1.0..1.0f64)
            .prop_map(|(slope, intercept)| WarpingFunction::Affine { slope, intercept }),
        prop::collection::vec(-0.3..0.3f64, 1..4).prop_map(WarpingFunction::Polynomial),
    ]
}

fn point(rho_max: f64) -> impl Strategy<Value = Point> {
    (0.1..rho_max, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(r, o, t)| Point::new(r, o, t))
}

fn vector() -> impl Strategy<Value = TangentVector> {
    prop::array::uniform3(-1.0..1.0f64).prop_map(TangentVector)
}

fn shifted(p: &Point, i: Coord, d: f64) -> Point {
    let mut q = *p;
    match i {
        Coord::Rho => q.rho += d,
        Coord::Omega => q.omega += d,
        Coord::T => q.t += d,
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn torsion_free(w in warp(), p in point(10.0)) {
        let g = christoffel(&w, &p).unwrap();
        for i in Coord::ALL {
            for j in Coord::ALL {
                for k in Coord::ALL {
                    prop_assert_eq!(g.get(i, j, k), g.get(j, i, k));
                    prop_assert!(g.get(i, j, k).is_finite());
                }
            }
        }
    }

    #[test]
    fn metric_compatible(w in warp(), p in point(4.0)) {
        let g = christoffel(&w, &p).unwrap();
        let step = 1e-5;
        for i in Coord::ALL {
            for j in Coord::ALL {
                for k in Coord::ALL {
                    let (xj, xk) = (TangentVector::basis(j), TangentVector::basis(k));
                    let fd = (metric_eval(&w, &shifted(&p, i, step), &xj, &xk)
                        - metric_eval(&w, &shifted(&p, i, -step), &xj, &xk))
                        / (2.0 * step);
                    let xi = TangentVector::basis(i);
                    let exact = metric_eval(&w, &p, &g.covariant(&xi, &xj), &xk)
                        + metric_eval(&w, &p, &xj, &g.covariant(&xi, &xk));
                    prop_assert!((fd - exact).abs() < 1e-4, "{:?}{:?}{:?}: {} vs {}", i, j, k, fd, exact);
                }
            }
        }
    }

    #[test]
    fn isometry_generators_are_killing(w in warp(), p in point(10.0), y in vector(), z in vector()) {
        for field in [KillingCandidate::DT, KillingCandidate::DOmega] {
            let r = killing_residual(&w, field, &p, &y, &z).unwrap();
            prop_assert!(r.abs() < 1e-10, "{:?}: {}", field, r);
        }
    }

    #[test]
    fn metric_is_symmetric_and_nonnegative(w in warp(), p in point(10.0), u in vector(), v in vector()) {
        prop_assert_eq!(metric_eval(&w, &p, &u, &v), metric_eval(&w, &p, &v, &u));
        prop_assert!(metric_eval(&w, &p, &u, &u) >= 0.0);
    }

    #[test]
    fn warping_derivative_matches_difference(w in warp(), rho in 0.1..10.0f64) {
        let d = 1e-5;
        let fd = (w.h(rho + d) - w.h(rho - d)) / (2.0 * d);
        let exact = w.h_rho(rho);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }
}

#[test]
fn radial_field_residual_is_twice_fiber_gradient() {
    // d_rho with Y = Z = d_t at rho = 1, h = rho: 2 h_rho e^{2h}
    let w = WarpingFunction::Linear;
    let p = Point::new(1.0, 0.0, 0.0);
    let r = killing_residual(
        &w,
        KillingCandidate::DRho,
        &p,
        &TangentVector::d_t(),
        &TangentVector::d_t(),
    )
    .unwrap();
    let oracle = {
        let g = christoffel(&w, &p).unwrap();
        let n = g.covariant(&TangentVector::d_t(), &TangentVector::d_rho());
        2.0 * metric_eval(&w, &p, &n, &TangentVector::d_t())
    };
    assert_eq!(r, oracle);
    assert!((r - 2.0 * std::f64::consts::E.powi(2)).abs() < 1e-12);
}
