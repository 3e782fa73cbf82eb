//! Convex bodies containing the origin in their interior: support and radial
//! functions, Wulff shapes, polar bodies, metrics and L_p combinations.

mod body;
mod ops;
mod polytope;

pub use body::{Ball, RadialFunction, SupportFunction};
pub use ops::{hausdorff_distance, lp_combination, max_radial, polar_body, radial_distance, MaxRadial};
pub use polytope::{Facet, Polytope, GEOMETRY_TOL, UNIT_TOL};

use crate::scalar::{Real, Vec3};

/// Common view of a convex body `K` with `o ∈ int K`.
pub trait ConvexBody<T: Real> {
    fn dim(&self) -> usize;

    /// `h_K(u) = max_{y∈K} u·y`.
    fn support(&self, u: Vec3<T>) -> T;

    /// `ρ_K(u) = max{λ > 0 : λu ∈ K}` for unit `u`.
    fn radial(&self, u: Vec3<T>) -> T;

    /// Directions at which the body has facets; L_p combinations include them
    /// in their constraint set.
    fn normal_directions(&self) -> Vec<Vec3<T>> {
        Vec::new()
    }

    /// Directions of boundary points that may realise the maximal radius
    /// (vertex directions for polytopes).
    fn extreme_directions(&self) -> Vec<Vec3<T>> {
        Vec::new()
    }
}
