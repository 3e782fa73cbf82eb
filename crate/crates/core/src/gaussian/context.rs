use crate::error::{Error, Result};
use crate::quadrature::{GaussLegendre, TriangleRule};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::SphericalGrid;

pub const DEFAULT_R_MAX: f64 = 8.0;
const RADIAL_PANELS: usize = 16;
const RADIAL_ORDER: usize = 16;
const EDGE_ORDER: usize = 12;
pub const DEFAULT_FACET_ORDER: usize = 12;

/// Shared quadrature state for Gaussian integrals in dimension n.
///
/// Holds a composite Gauss–Legendre rule for the radial profile
/// `G(ρ) = ∫_0^ρ t^{n-1} e^{-t²/2} dt` on `[0, R_max]`, the rules used on
/// facets, and the working sphere grid.
#[derive(Debug, Clone)]
pub struct GaussianContext<T> {
    dim: usize,
    r_max: T,
    normalization: T,
    radial_rule: GaussLegendre<T>,
    panel_width: T,
    cumulative: Vec<T>,
    edge_rule: GaussLegendre<T>,
    triangle_rule: TriangleRule<T>,
    facet_order: usize,
    facet_panel: T,
    grid: SphericalGrid<T>,
}

impl<T: Real> GaussianContext<T> {
    /// Context with `R_max = 8` and the default grid for the dimension.
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_grid(SphericalGrid::default_for(dim)?)
    }

    pub fn with_grid(grid: SphericalGrid<T>) -> Result<Self> {
        Self::build(grid, T::lit(DEFAULT_R_MAX), DEFAULT_FACET_ORDER, T::one())
    }

    /// Same context with a finer facet quadrature (used by verification).
    pub fn refined(&self) -> Result<Self> {
        Self::build(self.grid.clone(), self.r_max, self.facet_order + 8, self.facet_panel / T::lit(2.0))
    }

    fn build(grid: SphericalGrid<T>, r_max: T, facet_order: usize, facet_panel: T) -> Result<Self> {
        let dim = grid.dim();
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if r_max < T::lit(DEFAULT_R_MAX) {
            return Err(Error::InvalidInput(format!("R_max must be at least 8, got {r_max}")));
        }
        let radial_rule = GaussLegendre::new(RADIAL_ORDER);
        let panel_width = r_max / T::from_usize_lossy(RADIAL_PANELS);
        let mut cumulative = Vec::with_capacity(RADIAL_PANELS + 1);
        cumulative.push(T::zero());
        let mut acc = T::zero();
        for k in 0..RADIAL_PANELS {
            let lo = panel_width * T::from_usize_lossy(k);
            acc += radial_rule.integrate(lo, lo + panel_width, |t| radial_integrand(dim, t));
            cumulative.push(acc);
        }
        let normalization = (T::TAU()).powf(-T::from_usize_lossy(dim) / T::lit(2.0));
        let ctx = Self {
            dim,
            r_max,
            normalization,
            radial_rule,
            panel_width,
            cumulative,
            edge_rule: GaussLegendre::new(EDGE_ORDER),
            triangle_rule: TriangleRule::new(facet_order),
            facet_order,
            facet_panel,
            grid,
        };
        Ok(ctx)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    /// `(√(2π))^{-n}`.
    pub fn normalization(&self) -> T {
        self.normalization
    }

    pub fn grid(&self) -> &SphericalGrid<T> {
        &self.grid
    }

    pub fn facet_order(&self) -> usize {
        self.facet_order
    }

    /// `G(ρ) = ∫_0^{min(ρ, R_max)} t^{n-1} e^{-t²/2} dt`.
    pub fn radial_profile(&self, rho: T) -> T {
        if !(rho > T::zero()) {
            return T::zero();
        }
        if rho >= self.r_max {
            return self.cumulative[self.cumulative.len() - 1];
        }
        let k = (rho / self.panel_width).floor().to_usize().unwrap_or(0).min(self.cumulative.len() - 2);
        let lo = self.panel_width * T::from_usize_lossy(k);
        let dim = self.dim;
        self.cumulative[k] + self.radial_rule.integrate(lo, rho, |t| radial_integrand(dim, t))
    }

    /// `∫_0^∞ t^{n-1} e^{-t²/2} dt = 2^{n/2-1} Γ(n/2)`, as reproduced by the rule.
    pub fn radial_total(&self) -> T {
        self.cumulative[self.cumulative.len() - 1]
    }

    /// Integrates `f` along the segment `[a, b]` with respect to arc length.
    pub(crate) fn integrate_segment<F: FnMut(Vec3<T>) -> T>(&self, a: Vec3<T>, b: Vec3<T>, mut f: F) -> T {
        let d = b - a;
        let len = d.norm();
        if len == T::zero() {
            return T::zero();
        }
        let pieces = (len / self.facet_panel).ceil().to_usize().unwrap_or(1).max(1);
        self.edge_rule.integrate_composite(T::zero(), T::one(), pieces, |s| f(a + d * s)) * len
    }

    /// Integrates `f` over a convex planar polygon in R³ (fan triangulation,
    /// triangles subdivided until every edge is at most the facet panel).
    pub(crate) fn integrate_polygon<F: FnMut(Vec3<T>) -> T>(&self, loop_vertices: &[Vec3<T>], mut f: F) -> T {
        let mut acc = T::zero();
        if loop_vertices.len() < 3 {
            return acc;
        }
        let v0 = loop_vertices[0];
        for w in loop_vertices[1..].windows(2) {
            acc += self.integrate_triangle(v0, w[0], w[1], &mut f, 0);
        }
        acc
    }

    fn integrate_triangle<F: FnMut(Vec3<T>) -> T>(&self, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, f: &mut F, depth: usize) -> T {
        let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
        if longest <= self.facet_panel || depth >= 12 {
            return self.triangle_rule.integrate(a, b, c, &mut *f);
        }
        let half = T::lit(0.5);
        let (ab, bc, ca) = ((a + b) * half, (b + c) * half, (c + a) * half);
        self.integrate_triangle(a, ab, ca, f, depth + 1)
            + self.integrate_triangle(ab, b, bc, f, depth + 1)
            + self.integrate_triangle(ca, bc, c, f, depth + 1)
            + self.integrate_triangle(ab, bc, ca, f, depth + 1)
    }
}

#[inline]
fn radial_integrand<T: Real>(dim: usize, t: T) -> T {
    let g = (-t * t / T::lit(2.0)).exp();
    match dim {
        2 => t * g,
        _ => t * t * g,
    }
}
