use crate::convex::{Ball, ConvexBody, Polytope, SupportFunction};
use crate::error::{Error, Result};
use crate::scalar::{normal_interval, Real};

use super::measure::{Atom, SphereMeasure};
use super::monge_ampere::ma_sector_masses;
use super::GaussianContext;

/// Smallest support value allowed under an `h^{1-p}` weight for `p > 1`.
pub const MIN_SUPPORT_FOR_LP: f64 = 1e-6;

/// Bodies whose Gaussian volume and Gaussian surface area measure can be
/// evaluated.
pub trait GaussianBody<T: Real>: ConvexBody<T> {
    /// `γ_n(K)`.
    fn gaussian_volume(&self, ctx: &GaussianContext<T>) -> Result<T>;

    /// `S_{γ_n,K}`: push-forward of `(√(2π))^{-n} e^{-|x|²/2} dH^{n-1}` on
    /// `∂K` under the Gauss map.
    fn gauss_surface_measure(&self, ctx: &GaussianContext<T>) -> Result<SphereMeasure<T>>;

    /// Support values paired with the atoms of [`GaussianBody::gauss_surface_measure`].
    fn atom_supports(&self, measure: &SphereMeasure<T>) -> Vec<T> {
        measure.atoms().iter().map(|a| self.support(a.direction)).collect()
    }
}

fn check_ctx<T: Real>(ctx: &GaussianContext<T>, dim: usize) -> Result<()> {
    if ctx.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: ctx.dim() });
    }
    Ok(())
}

/// `γ_n(K) = (√(2π))^{-n} ∫_{S^{n-1}} G(ρ_K(u)) du` on the context grid.
///
/// Works for any body; for polytopes the facet-cone evaluation used by
/// [`GaussianBody::gaussian_volume`] avoids the grid error at vertices.
pub fn gaussian_volume_on_grid<T: Real, B: ConvexBody<T> + ?Sized>(ctx: &GaussianContext<T>, body: &B) -> Result<T> {
    check_ctx(ctx, body.dim())?;
    let integral = ctx.grid().integrate(|u| ctx.radial_profile(body.radial(u)))?;
    Ok(ctx.normalization() * integral)
}

impl<T: Real> GaussianBody<T> for Polytope<T> {
    /// Sum over facet cones: `γ_n(K) = (√(2π))^{-n} Σ_i h_i ∫_{F_i} |y|^{-n} G(|y|) dH^{n-1}(y)`.
    fn gaussian_volume(&self, ctx: &GaussianContext<T>) -> Result<T> {
        check_ctx(ctx, self.dim())?;
        let n = self.dim() as i32;
        let cone = |y: crate::scalar::Vec3<T>| {
            let r = y.norm();
            ctx.radial_profile(r) / r.powi(n)
        };
        let mut acc = T::zero();
        for (i, facet) in self.facets().iter().enumerate() {
            if facet.redundant {
                continue;
            }
            let h = self.support_numbers()[i];
            let integral = match self.dim() {
                2 => ctx.integrate_segment(facet.vertices[0], facet.vertices[1], cone),
                _ => ctx.integrate_polygon(&facet.vertices, cone),
            };
            acc += h * integral;
        }
        Ok(ctx.normalization() * acc)
    }

    /// One atom per constraint; redundant constraints carry zero mass.
    fn gauss_surface_measure(&self, ctx: &GaussianContext<T>) -> Result<SphereMeasure<T>> {
        check_ctx(ctx, self.dim())?;
        let atoms = (0..self.len())
            .map(|i| Atom { direction: self.normals()[i], mass: facet_gauss_mass(ctx, self, i) })
            .collect();
        SphereMeasure::discrete(self.dim(), atoms)
    }

    fn atom_supports(&self, _measure: &SphereMeasure<T>) -> Vec<T> {
        self.support_numbers().to_vec()
    }
}

/// `(√(2π))^{-n} ∫_{F_i} e^{-|x|²/2} dH^{n-1}(x)`.
///
/// Planar facets are exact: with `x = h u + s u^⊥`, the integral factors into
/// `e^{-h²/2}` times a normal-distribution interval.
pub fn facet_gauss_mass<T: Real>(ctx: &GaussianContext<T>, body: &Polytope<T>, i: usize) -> T {
    let facet = &body.facets()[i];
    if facet.redundant {
        return T::zero();
    }
    let h = body.support_numbers()[i];
    match body.dim() {
        2 => {
            let tangent = body.normals()[i].perp();
            let s0 = facet.vertices[0].dot(tangent);
            let s1 = facet.vertices[1].dot(tangent);
            let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
            (-h * h / T::lit(2.0)).exp() * normal_interval(lo, hi) / T::TAU().sqrt()
        }
        _ => ctx.normalization() * ctx.integrate_polygon(&facet.vertices, |x| (-x.norm_sq() / T::lit(2.0)).exp()),
    }
}

impl<T: Real> GaussianBody<T> for Ball<T> {
    fn gaussian_volume(&self, ctx: &GaussianContext<T>) -> Result<T> {
        check_ctx(ctx, self.dim)?;
        Ok(ctx.normalization() * crate::sphere_grid::sphere_area::<T>(self.dim) * ctx.radial_profile(self.radius))
    }

    /// Constant density `(√(2π))^{-n} r^{n-1} e^{-r²/2}` on the context grid.
    fn gauss_surface_measure(&self, ctx: &GaussianContext<T>) -> Result<SphereMeasure<T>> {
        check_ctx(ctx, self.dim)?;
        let r = self.radius;
        let density = ctx.normalization() * r.powi(self.dim as i32 - 1) * (-r * r / T::lit(2.0)).exp();
        SphereMeasure::from_density(ctx.grid(), |_| density)
    }
}

impl<T: Real> GaussianBody<T> for SupportFunction<T> {
    fn gaussian_volume(&self, ctx: &GaussianContext<T>) -> Result<T> {
        self.wulff_shape().gaussian_volume(ctx)
    }

    /// Sector masses of the Monge–Ampère density on the function's own
    /// (planar) grid.
    fn gauss_surface_measure(&self, ctx: &GaussianContext<T>) -> Result<SphereMeasure<T>> {
        check_ctx(ctx, self.dim())?;
        let masses = ma_sector_masses(ctx, self, T::one())?;
        let atoms = self.grid().nodes().iter().zip(masses).map(|(u, m)| Atom { direction: *u, mass: m }).collect();
        SphereMeasure::new(
            self.dim(),
            atoms,
            super::measure::Representation::GridDensity { resolution: self.grid().resolution() },
        )
    }

    fn atom_supports(&self, _measure: &SphereMeasure<T>) -> Vec<T> {
        self.values().to_vec()
    }
}

/// `γ_n(K)`.
pub fn gaussian_volume<T: Real, B: GaussianBody<T> + ?Sized>(ctx: &GaussianContext<T>, body: &B) -> Result<T> {
    body.gaussian_volume(ctx)
}

/// `S_{γ_n,K}`.
pub fn gauss_surface_measure<T: Real, B: GaussianBody<T> + ?Sized>(
    ctx: &GaussianContext<T>,
    body: &B,
) -> Result<SphereMeasure<T>> {
    body.gauss_surface_measure(ctx)
}

/// `S_{p,γ_n}(K,·) = h_K^{1-p} S_{γ_n,K}`.
pub fn lp_surface_measure<T: Real, B: GaussianBody<T> + ?Sized>(
    ctx: &GaussianContext<T>,
    body: &B,
    p: T,
) -> Result<SphereMeasure<T>> {
    check_exponent(p)?;
    let base = body.gauss_surface_measure(ctx)?;
    let supports = body.atom_supports(&base);
    apply_lp_weight(&base, &supports, p)
}

pub(crate) fn check_exponent<T: Real>(p: T) -> Result<()> {
    if !(p >= T::one()) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("exponent p must be >= 1, got {p}")));
    }
    Ok(())
}

/// Multiplies each atom by `h^{1-p}`, refusing bodies whose origin is within
/// [`MIN_SUPPORT_FOR_LP`] of a charged facet when `p > 1`.
pub fn apply_lp_weight<T: Real>(base: &SphereMeasure<T>, supports: &[T], p: T) -> Result<SphereMeasure<T>> {
    if supports.len() != base.len() {
        return Err(Error::Inconsistent(format!("{} supports for {} atoms", supports.len(), base.len())));
    }
    if p == T::one() {
        return Ok(base.clone());
    }
    let floor = T::lit(MIN_SUPPORT_FOR_LP);
    let exponent = T::one() - p;
    let mut masses = Vec::with_capacity(base.len());
    for (a, h) in base.atoms().iter().zip(supports) {
        if a.mass > T::zero() && *h < floor {
            return Err(Error::OriginTooClose { min_support: h.to_f64_lossy() });
        }
        masses.push(if a.mass > T::zero() { a.mass * h.powf(exponent) } else { T::zero() });
    }
    base.with_masses(masses)
}
