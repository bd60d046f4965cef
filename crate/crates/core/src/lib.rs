//! Rotational elliptic Weingarten surfaces of minimal type in the warped
//! product `R^2 x_h R` with metric `d rho^2 + rho^2 d omega^2 + e^{2h(rho)} dt^2`.
//!
//! The generating curve is integrated from its waist in arc length, closed by
//! Newton on the highest derivative, and checked against the qualitative
//! properties such profiles must have.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod solver;
pub mod sweep;
pub mod weingarten;

use std::fmt;

pub use analysis::{
    check_radius_divergence, check_symmetry, estimate_height_asymptote, verify_invariants,
    CheckResult, HeightAsymptote, InvariantReport,
};
pub use curvature::{ArcState, CurvaturePair, GraphState};
pub use error::{Error, Result};
pub use geometry::{Point, TangentVector, WarpingFunction};
pub use solver::{
    integrate_arc, integrate_graph, rebuild_profile, solve_profile, Classification,
    ProfileSolution, SolverOptions, TerminationReason,
};
pub use weingarten::{EllipticFamily, EllipticFunction};

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInf => f.write_str("inf"),
            ExtendedReal::NegInf => f.write_str("-inf"),
        }
    }
}
