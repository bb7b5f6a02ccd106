//! Inverse problem for the droplet: find θ and the exterior map `f`.
//!
//! The unknowns are the Laurent coefficients of θ; `f` is rebuilt from θ by
//! an analytic projection of `log I⁻¹(θ)` on the unit circle, and θ is
//! fixed by cancelling the poles of `θ − f·P′(f)` at the origin together
//! with the unit mass condition.

mod closed_form;
mod fourier;
mod map;
mod solve;

use num_complex::Complex64;
use thiserror::Error;

use crate::potential::PotentialError;

pub use closed_form::{closed_form_power, ClosedForm};
pub use fourier::{cauchy_project, CircleGrid};
pub use map::{build_map, closed_form_map, ConformalMap, ThetaCoefficients, THETA_FLOOR};
pub use solve::{
    boundary_curve, mass, mass_complex, self_consistency, singular_mismatch, solve, BoundarySolution,
    Residuals, SolveOptions,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("θ is not positive on the circle (min {min:e}, max {max:e})")]
    ThetaNonPositive { min: f64, max: f64 },
    #[error("f·P′(f) overflows on every probe circle")]
    EvaluationOverflow,
    #[error("Newton did not converge at t = {t} (residual {residual:e})")]
    NoConvergence { t: f64, residual: f64 },
    #[error("boundary breakdown at t = {t} (θ min/max ratio {ratio:e})")]
    BoundaryBreakdown { t: f64, ratio: f64 },
    #[error("closed-form equation has no admissible root")]
    NoRealRoot,
    #[error("map root {0} lies in the closed unit disk")]
    RootInsideDisk(Complex64),
    #[error("boundary curve intersects itself")]
    SelfIntersection { curve: Vec<Complex64> },
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

impl BoundaryError {
    /// Failures that signal the end of the simply connected regime.
    pub fn is_breakdown(&self) -> bool {
        matches!(
            self,
            Self::BoundaryBreakdown { .. } | Self::ThetaNonPositive { .. } | Self::NoRealRoot
        )
    }
}
