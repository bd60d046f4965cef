use ewmt_core::analysis::{symmetry_residual, CHECK_NAMES, SYMMETRY_TOL};
use ewmt_core::{
    check_symmetry, integrate_arc, solve_profile, verify_invariants, EllipticFunction,
    SolverOptions, WarpingFunction,
};

fn cases() -> Vec<(WarpingFunction, EllipticFunction, f64)> {
    vec![
        (WarpingFunction::Linear, EllipticFunction::zero(), 1.0),
        (
            WarpingFunction::Linear,
            EllipticFunction::sqrt_scaled(0.5).unwrap(),
            1.0,
        ),
        (WarpingFunction::Linear, EllipticFunction::zero(), 0.5),
        (WarpingFunction::flat(), EllipticFunction::zero(), 1.0),
        (
            WarpingFunction::Polynomial(vec![0.0, 0.5, 0.25]),
            EllipticFunction::sqrt_scaled(-0.3).unwrap(),
            1.5,
        ),
    ]
}

#[test]
fn every_check_appears_once_and_all_pass() {
    let opts = SolverOptions::default();
    for (w, f, rho0) in cases() {
        let sol = solve_profile(&w, &f, rho0, &opts).unwrap();
        let report = verify_invariants(&sol, &w, &f);
        let names: Vec<&str> = report
            .checks
            .iter()
            .map(|c| c.check_name.as_str())
            .collect();
        assert_eq!(names, CHECK_NAMES);
        let failed: Vec<_> = report.failed().map(|c| c.check_name.clone()).collect();
        assert!(failed.is_empty(), "{w:?} {rho0}: {failed:?}");
        assert_eq!(report.overall, report.checks.iter().all(|c| c.passed));
    }
}

#[test]
fn flat_case_skips_the_sign_checks() {
    let (w, f) = (WarpingFunction::flat(), EllipticFunction::zero());
    let sol = solve_profile(&w, &f, 1.0, &SolverOptions::default()).unwrap();
    let report = verify_invariants(&sol, &w, &f);
    assert_eq!(report.h_rho_min, 0.0);
    for name in ["principal_curvature_signs", "waist_unique", "t_ss_sign"] {
        let c = report.get(name).unwrap();
        assert!(c.skipped && c.passed, "{name}");
    }
    for name in [
        "extrinsic_curvature_nonpositive",
        "fiber_speed_positive",
        "rho_convexity",
    ] {
        let c = report.get(name).unwrap();
        assert!(!c.skipped && c.passed, "{name}");
    }
}

#[test]
fn symmetry_of_mirrored_profiles() {
    let (w, f) = (WarpingFunction::Linear, EllipticFunction::zero());
    let sol = solve_profile(&w, &f, 1.0, &SolverOptions::default()).unwrap();
    assert_eq!(symmetry_residual(&sol).0, 0.0);
    assert!(check_symmetry(&sol, SYMMETRY_TOL));

    let mut shifted = sol.clone();
    let k = shifted.waist_index();
    for a in &mut shifted.samples[..k] {
        a.t += 0.1;
    }
    assert!(!check_symmetry(&shifted, SYMMETRY_TOL));
    let report = verify_invariants(&shifted, &w, &f);
    assert!(!report.get("mirror_symmetry").unwrap().passed);
    assert!(!report.overall);
}

#[test]
fn unmirrored_branch_skips_symmetry() {
    let (w, f) = (WarpingFunction::Linear, EllipticFunction::zero());
    let sol = integrate_arc(&w, &f, 1.0, &SolverOptions::default()).unwrap();
    let report = verify_invariants(&sol, &w, &f);
    assert!(report.get("mirror_symmetry").unwrap().skipped);
    assert!(report.overall);
}
