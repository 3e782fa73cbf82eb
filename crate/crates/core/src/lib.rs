//! Numerical toolkit for L_p Gaussian surface area measures of convex bodies
//! and the discrete L_p Gaussian Minkowski problem.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! below fix it to `f64` or `f32`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuity;
pub mod convex;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod sphere_grid;

pub use convex::{Ball, ConvexBody, Polytope, RadialFunction, SupportFunction};
pub use error::{Error, Result};
pub use gaussian::{GaussianBody, GaussianContext, SphereMeasure};
pub use scalar::{Real, Vec3};
pub use solver::{SolverConfig, SolverReport};
pub use sphere_grid::SphericalGrid;

pub type Polytope64 = Polytope<f64>;
pub type SupportFunction64 = SupportFunction<f64>;
pub type Ball64 = Ball<f64>;
pub type SphericalGrid64 = SphericalGrid<f64>;
pub type SphereMeasure64 = SphereMeasure<f64>;
pub type GaussianContext64 = GaussianContext<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolverReport64 = SolverReport<f64>;
pub type Vec3f64 = Vec3<f64>;

pub type Polytope32 = Polytope<f32>;
pub type SupportFunction32 = SupportFunction<f32>;
pub type Ball32 = Ball<f32>;
pub type SphericalGrid32 = SphericalGrid<f32>;
pub type SphereMeasure32 = SphereMeasure<f32>;
pub type GaussianContext32 = GaussianContext<f32>;
pub type Vec3f32 = Vec3<f32>;
