use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::SphericalGrid;

use super::{ConvexBody, Polytope};

/// Polar body `K* = {x : x·y ≤ 1 ∀ y ∈ K}` of a polytope, built as the
/// Wulff shape with normals `v/|v|` and values `1/|v|` over the vertices.
pub fn polar_body<T: Real>(body: &Polytope<T>) -> Result<Polytope<T>> {
    let mut normals = Vec::with_capacity(body.vertices().len());
    let mut values = Vec::with_capacity(body.vertices().len());
    for v in body.vertices() {
        let r = v.norm();
        if r <= T::lit(super::GEOMETRY_TOL) {
            return Err(Error::OriginTooClose { min_support: r.to_f64_lossy() });
        }
        normals.push(*v / r);
        values.push(T::one() / r);
    }
    Polytope::wulff(body.dim(), normals, values)
}

fn check_dims<T: Real>(a: usize, b: usize, grid: &SphericalGrid<T>) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    if a != grid.dim() {
        return Err(Error::DimensionMismatch { left: a, right: grid.dim() });
    }
    Ok(())
}

/// `max_k |h_a(u_k) − h_b(u_k)|` over the grid nodes.
pub fn hausdorff_distance<T, A, B>(a: &A, b: &B, grid: &SphericalGrid<T>) -> Result<T>
where
    T: Real,
    A: ConvexBody<T> + ?Sized,
    B: ConvexBody<T> + ?Sized,
{
    check_dims(a.dim(), b.dim(), grid)?;
    Ok(grid.nodes().iter().map(|u| (a.support(*u) - b.support(*u)).abs()).fold(T::zero(), T::max))
}

/// `max_k |ρ_a(u_k) − ρ_b(u_k)|` over the grid nodes.
pub fn radial_distance<T, A, B>(a: &A, b: &B, grid: &SphericalGrid<T>) -> Result<T>
where
    T: Real,
    A: ConvexBody<T> + ?Sized,
    B: ConvexBody<T> + ?Sized,
{
    check_dims(a.dim(), b.dim(), grid)?;
    Ok(grid.nodes().iter().map(|u| (a.radial(*u) - b.radial(*u)).abs()).fold(T::zero(), T::max))
}

/// `s·K +_p t·L = [(s h_K^p + t h_L^p)^{1/p}]`, with the Wulff shape taken
/// over the facet normals of both bodies together with the grid nodes.
pub fn lp_combination<T, K, L>(p: T, s: T, k: &K, t: T, l: &L, grid: &SphericalGrid<T>) -> Result<Polytope<T>>
where
    T: Real,
    K: ConvexBody<T> + ?Sized,
    L: ConvexBody<T> + ?Sized,
{
    if !(p >= T::one()) {
        return Err(Error::InvalidInput(format!("L_p combination needs p >= 1, got {p}")));
    }
    check_dims(k.dim(), l.dim(), grid)?;
    let mut dirs: Vec<Vec3<T>> = Vec::new();
    let eps = T::lit(1e-12);
    let candidates = k.normal_directions().into_iter().chain(l.normal_directions()).chain(grid.nodes().iter().copied());
    for u in candidates {
        if !dirs.iter().any(|d| d.max_abs_diff(u) <= eps) {
            dirs.push(u);
        }
    }
    let mut values = Vec::with_capacity(dirs.len());
    for (index, u) in dirs.iter().enumerate() {
        let base = s * k.support(*u).powf(p) + t * l.support(*u).powf(p);
        if !(base > T::zero()) {
            return Err(Error::NonPositiveCombination { index, value: base.to_f64_lossy() });
        }
        values.push(base.powf(T::one() / p));
    }
    Polytope::wulff(k.dim(), dirs, values)
}

/// Largest radial value `R` and a direction attaining it; `K ⊆ R·B_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRadial<T> {
    pub radius: T,
    pub direction: Vec3<T>,
}

/// Maximum of `ρ_K` over the grid nodes and the body's extreme directions.
pub fn max_radial<T: Real, B: ConvexBody<T> + ?Sized>(body: &B, grid: &SphericalGrid<T>) -> Result<MaxRadial<T>> {
    if body.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { left: body.dim(), right: grid.dim() });
    }
    let mut best = MaxRadial { radius: T::neg_infinity(), direction: grid.nodes()[0] };
    for u in grid.nodes().iter().copied().chain(body.extreme_directions()) {
        let r = body.radial(u);
        if r > best.radius {
            best = MaxRadial { radius: r, direction: u };
        }
    }
    Ok(best)
}
