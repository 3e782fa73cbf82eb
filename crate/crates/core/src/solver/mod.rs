//! Discrete L_p Gaussian Minkowski problem: find `K` with
//! `S_{p,γ_n}(K,·) = μ` and `γ_n(K) ≥ 1/2`.

mod ball;
mod newton;
mod verify;

use crate::convex::Polytope;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use ball::{ball_profile, solve_ball, BallSolution};
pub use newton::solve_discrete;
pub use verify::{verify_solution, VerifySummary};

/// Lowest Gaussian volume accepted for a solution.
pub const VOLUME_FLOOR: f64 = 0.5 - 1e-9;
/// Iterates below this Gaussian volume are rejected by the line search.
pub const ITERATE_VOLUME_FLOOR: f64 = 0.45;
/// Initial radii tried in turn when the iteration is pushed below
/// [`ITERATE_VOLUME_FLOOR`].
pub const RESTART_RADII: [f64; 3] = [3.0, 4.5, 6.0];

#[derive(Debug, Clone)]
pub enum Initialization<T> {
    /// `h ≡ radius` on the measure's directions.
    LargeBall { radius: T },
    /// Support values of the given body on the measure's directions.
    GivenBody(Polytope<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianKind {
    /// Forward differences with step `1e-6·h_i`, columns evaluated in parallel.
    FiniteDifference,
    /// Closed-form derivatives of planar facet masses; falls back to finite
    /// differences while a facet is redundant.
    N2Analytic,
}

#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    pub residual_tol: T,
    pub max_iterations: usize,
    pub damping: T,
    pub initialization: Initialization<T>,
    pub jacobian: JacobianKind,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            residual_tol: T::lit(1e-9),
            max_iterations: 200,
            damping: T::one(),
            initialization: Initialization::LargeBall { radius: T::lit(RESTART_RADII[0]) },
            jacobian: JacobianKind::FiniteDifference,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol > T::zero()) {
            return Err(Error::InvalidInput(format!("residual_tol must be positive, got {}", self.residual_tol)));
        }
        if !(self.damping > T::zero() && self.damping <= T::one()) {
            return Err(Error::InvalidInput(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be positive".into()));
        }
        if let Initialization::LargeBall { radius } = self.initialization {
            if !(radius > T::zero()) {
                return Err(Error::InvalidInput(format!("initial radius must be positive, got {radius}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry<T> {
    pub residual: T,
    pub gauss_volume: T,
    pub max_radial: T,
}

#[derive(Debug, Clone)]
pub struct SolverReport<T> {
    pub solution: Polytope<T>,
    /// `max_i |S_{p,γ_n}(K, u_i) − μ_i|`.
    pub residual: T,
    pub gauss_volume: T,
    pub iterations: usize,
    pub branch_note: String,
    pub trace: Vec<TraceEntry<T>>,
}
