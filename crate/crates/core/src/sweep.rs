//! Families of profiles over the waist radius.

use crate::error::Result;
use crate::geometry::WarpingFunction;
use crate::solver::{solve_profile, ProfileSolution, SolverOptions};
use crate::weingarten::EllipticFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho0: f64,
    pub outcome: Result<ProfileSolution>,
    /// `h_rho(rho0) * rho0`.
    pub h_rho_rho0: f64,
    /// Set when `h_rho(rho0) * rho0 < 1`.
    pub eut_warning: bool,
}

fn solve_row(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0: f64,
    opts: &SolverOptions,
) -> SweepRow {
    let product = w.h_rho(rho0) * rho0;
    SweepRow {
        rho0,
        outcome: solve_profile(w, f, rho0, opts),
        h_rho_rho0: product,
        eut_warning: product < 1.0,
    }
}

/// One profile per `rho0`, computed in order on the calling thread.
pub fn solve_family_sequential(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0_list: &[f64],
    opts: &SolverOptions,
) -> Vec<SweepRow> {
    rho0_list
        .iter()
        .map(|&r| solve_row(w, f, r, opts))
        .collect()
}

/// Same as [`solve_family_sequential`], with one rayon task per `rho0`.
/// Rows keep the input order.
#[cfg(feature = "parallel")]
pub fn solve_family_parallel(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0_list: &[f64],
    opts: &SolverOptions,
) -> Vec<SweepRow> {
    use rayon::prelude::*;
    rho0_list
        .par_iter()
        .map(|&r| solve_row(w, f, r, opts))
        .collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn solve_family(
    w: &WarpingFunction,
    f: &EllipticFunction,
    rho0_list: &[f64],
    opts: &SolverOptions,
) -> Vec<SweepRow> {
    #[cfg(feature = "parallel")]
    {
        solve_family_parallel(w, f, rho0_list, opts)
    }
    #[cfg(not(feature = "parallel"))]
    {
        solve_family_sequential(w, f, rho0_list, opts)
    }
}
