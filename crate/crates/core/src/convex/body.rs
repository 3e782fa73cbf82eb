use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::SphericalGrid;

use super::{ConvexBody, Polytope};

/// Euclidean ball `r·B_n`, evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<T> {
    pub dim: usize,
    pub radius: T,
}

impl<T: Real> Ball<T> {
    pub fn new(dim: usize, radius: T) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::NonPositiveSupport { index: 0, value: radius.to_f64_lossy() });
        }
        Ok(Self { dim, radius })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, T::one())
    }
}

impl<T: Real> ConvexBody<T> for Ball<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: Vec3<T>) -> T {
        self.radius * u.norm()
    }

    fn radial(&self, u: Vec3<T>) -> T {
        self.radius / u.norm()
    }
}

/// Sampled support function `h(u_k)` on a grid, together with its Wulff
/// shape `[h]` over the grid nodes.
#[derive(Debug, Clone)]
pub struct SupportFunction<T> {
    grid: SphericalGrid<T>,
    values: Vec<T>,
    body: Polytope<T>,
}

impl<T: Real> SupportFunction<T> {
    /// Fails when a value is not positive; a non-sublinear input is accepted
    /// here and detected by [`SupportFunction::check`].
    pub fn new(grid: SphericalGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        let body = Polytope::wulff(grid.dim(), grid.nodes().to_vec(), values.clone())?;
        Ok(Self { grid, values, body })
    }

    /// Samples `h_K` of an arbitrary body.
    pub fn of_body<B: ConvexBody<T> + ?Sized>(body: &B, grid: SphericalGrid<T>) -> Result<Self> {
        if body.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { left: body.dim(), right: grid.dim() });
        }
        let values = grid.nodes().iter().map(|u| body.support(*u)).collect();
        Self::new(grid, values)
    }

    /// Samples a closed-form support function.
    pub fn from_fn<F: Fn(Vec3<T>) -> T>(grid: SphericalGrid<T>, h: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|u| h(*u)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SphericalGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn wulff_shape(&self) -> &Polytope<T> {
        &self.body
    }

    /// `max_k |h_{[h]}(u_k) − h(u_k)|`; zero for genuine support functions.
    pub fn round_trip_gap(&self) -> T {
        self.grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(u, h)| (self.body.support(*u) - *h).abs())
            .fold(T::zero(), T::max)
    }

    /// Sublinearity check through the Wulff round trip.
    pub fn check(&self, tol: T) -> Result<()> {
        let gap = self.round_trip_gap();
        if gap > tol {
            return Err(Error::NotSupportFunction { gap: gap.to_f64_lossy() });
        }
        Ok(())
    }

    /// Sup-norm distance to another sampled function on the same grid.
    pub fn sup_distance(&self, other: &Self) -> Result<T> {
        if self.grid.dim() != other.grid.dim() {
            return Err(Error::DimensionMismatch { left: self.grid.dim(), right: other.grid.dim() });
        }
        if self.grid.resolution() != other.grid.resolution() {
            return Err(Error::InvalidInput("support functions sampled on different grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max))
    }
}

impl<T: Real> ConvexBody<T> for SupportFunction<T> {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn support(&self, u: Vec3<T>) -> T {
        self.body.support(u)
    }

    fn radial(&self, u: Vec3<T>) -> T {
        self.body.radial(u)
    }

    fn normal_directions(&self) -> Vec<Vec3<T>> {
        self.grid.nodes().to_vec()
    }

    fn extreme_directions(&self) -> Vec<Vec3<T>> {
        self.body.extreme_directions()
    }
}

/// Sampled radial function `ρ(u_k)` of a body on a grid.
#[derive(Debug, Clone)]
pub struct RadialFunction<T> {
    grid: SphericalGrid<T>,
    values: Vec<T>,
}

impl<T: Real> RadialFunction<T> {
    pub fn of_body<B: ConvexBody<T> + ?Sized>(body: &B, grid: SphericalGrid<T>) -> Result<Self> {
        if body.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { left: body.dim(), right: grid.dim() });
        }
        let values: Vec<T> = grid.nodes().iter().map(|u| body.radial(*u)).collect();
        if let Some(index) = values.iter().position(|r| !(*r > T::zero()) || !r.is_finite()) {
            return Err(Error::NonPositiveSupport { index, value: values[index].to_f64_lossy() });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SphericalGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Boundary points `ρ(u_k) u_k`.
    pub fn boundary_points(&self) -> Vec<Vec3<T>> {
        self.grid.nodes().iter().zip(&self.values).map(|(u, r)| *u * *r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_functions() {
        let b = Ball::new(3, 2.0).unwrap();
        let u = Vec3::new(0.0, 0.6, 0.8);
        assert_eq!(b.support(u), 2.0);
        assert_eq!(b.radial(u), 2.0);
        assert!(Ball::<f64>::new(2, -1.0).is_err());
    }

    #[test]
    fn support_function_round_trip() {
        let grid = SphericalGrid::<f64>::new(2, 360).unwrap();
        let ellipse = SupportFunction::from_fn(grid.clone(), |u| (4.0 * u.x * u.x + u.y * u.y).sqrt()).unwrap();
        ellipse.check(1e-12).unwrap();
        // a dent at one node is not sublinear
        let mut values = vec![1.0; 360];
        values[10] = 1.2;
        let dented = SupportFunction::new(grid, values).unwrap();
        assert!(matches!(dented.check(1e-9), Err(Error::NotSupportFunction { .. })));
        assert!((dented.round_trip_gap() - 0.2).abs() < 1e-3);
    }

    #[test]
    fn radial_points_lie_in_the_body() {
        let sq = Polytope::<f64>::cube(2, 1.0).unwrap();
        let rf = RadialFunction::of_body(&sq, SphericalGrid::new(2, 64).unwrap()).unwrap();
        for x in rf.boundary_points() {
            assert!(sq.contains(x, 1e-12));
            assert!(!sq.contains(x * 1.001, 0.0));
        }
    }
}
