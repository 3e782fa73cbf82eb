use crate::convex::{lp_combination, ConvexBody};
use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::SphericalGrid;

use super::body::{check_exponent, GaussianBody};
use super::measure::SphereMeasure;
use super::GaussianContext;

fn positive_volume<T: Real, B: GaussianBody<T> + ?Sized>(ctx: &GaussianContext<T>, body: &B) -> Result<T> {
    let gamma = body.gaussian_volume(ctx)?;
    if !(gamma > T::zero()) {
        return Err(Error::NonPositiveVolume(gamma.to_f64_lossy()));
    }
    Ok(gamma)
}

/// `Φ_p(K) = −(1/(p γ_n(K))) ∫ h_K^p dS_{p,γ_n}(K,·) + log γ_n(K)`.
///
/// The integral is also evaluated as `∫ h_K dS_{γ_n,K}`; the two must agree
/// atom by atom, otherwise [`Error::Inconsistent`] is returned.
pub fn phi_functional<T: Real, B: GaussianBody<T> + ?Sized>(ctx: &GaussianContext<T>, body: &B, p: T) -> Result<T> {
    check_exponent(p)?;
    let gamma = positive_volume(ctx, body)?;
    let base = body.gauss_surface_measure(ctx)?;
    let supports = body.atom_supports(&base);
    let lp = super::body::apply_lp_weight(&base, &supports, p)?;
    let with_p: T = lp.atoms().iter().zip(&supports).map(|(a, h)| h.powf(p) * a.mass).sum();
    let collapsed: T = base.atoms().iter().zip(&supports).map(|(a, h)| *h * a.mass).sum();
    let tol = T::lit(1e-10) * collapsed.abs().max(T::one());
    if (with_p - collapsed).abs() > tol {
        return Err(Error::Inconsistent(format!("∫h^p dS_p = {with_p} but ∫h dS = {collapsed}")));
    }
    Ok(-with_p / (p * gamma) + gamma.ln())
}

/// `(1/p) ∫ (h_L^p − h_K^p) dS_{p,γ_n}(K,·) − γ_n(K) log(γ_n(L)/γ_n(K))`,
/// nonnegative with equality only for `K = L`.
pub fn minkowski_gap<T, K, L>(ctx: &GaussianContext<T>, k: &K, l: &L, p: T) -> Result<T>
where
    T: Real,
    K: GaussianBody<T> + ?Sized,
    L: GaussianBody<T> + ?Sized,
{
    check_exponent(p)?;
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() });
    }
    let gamma_k = positive_volume(ctx, k)?;
    let gamma_l = positive_volume(ctx, l)?;
    let base = k.gauss_surface_measure(ctx)?;
    let supports = k.atom_supports(&base);
    let lp = super::body::apply_lp_weight(&base, &supports, p)?;
    let pairing: T = lp
        .atoms()
        .iter()
        .zip(&supports)
        .map(|(a, hk)| (l.support(a.direction).powf(p) - hk.powf(p)) * a.mass)
        .sum();
    Ok(pairing / p - gamma_k * (gamma_l / gamma_k).ln())
}

/// `g(u) = ∫ (u·v)_+^p dμ(v)` evaluated at one direction.
pub fn cosine_integral<T: Real>(measure: &SphereMeasure<T>, p: T, u: Vec3<T>) -> T {
    measure.integrate(|v| {
        let c = u.dot(v);
        if c > T::zero() {
            c.powf(p)
        } else {
            T::zero()
        }
    })
}

/// Minimum of `g(u) = ∫ (u·v)_+^p dμ(v)` over the grid nodes and its argmin.
pub fn cosine_lower_bound<T: Real>(measure: &SphereMeasure<T>, p: T, grid: &SphericalGrid<T>) -> Result<(T, Vec3<T>)> {
    check_exponent(p)?;
    if measure.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { left: measure.dim(), right: grid.dim() });
    }
    let mut best = (T::infinity(), grid.nodes()[0]);
    for u in grid.nodes() {
        let g = cosine_integral(measure, p, *u);
        if g < best.0 {
            best = (g, *u);
        }
    }
    Ok(best)
}

/// Difference quotients of `t ↦ γ_n(K +_p t·L)` at one step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalEstimate<T> {
    pub t: T,
    pub central: T,
    pub forward: T,
    pub backward: T,
    pub abs_error: T,
    pub rel_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalReport<T> {
    /// `(1/p) ∫ h_L^p dS_{p,γ_n}(K,·)`.
    pub rhs: T,
    pub gauss_volume: T,
    /// Errors refer to the central quotient.
    pub estimates: Vec<VariationalEstimate<T>>,
}

/// Compares difference quotients of `γ_n(K +_p t·L)` at `t = 0` with the
/// measure pairing `(1/p) ∫ h_L^p dS_{p,γ_n}(K,·)`.
///
/// All three volumes at a step come from [`lp_combination`] on the context
/// grid, so the `t = 0` body shares the discretization of its neighbours.
pub fn variational_check<T, K, L>(
    ctx: &GaussianContext<T>,
    k: &K,
    l: &L,
    p: T,
    t_steps: &[T],
) -> Result<VariationalReport<T>>
where
    T: Real,
    K: GaussianBody<T> + ?Sized,
    L: ConvexBody<T> + ?Sized,
{
    check_exponent(p)?;
    let grid = ctx.grid();
    let base = k.gauss_surface_measure(ctx)?;
    let supports = k.atom_supports(&base);
    let lp = super::body::apply_lp_weight(&base, &supports, p)?;
    let rhs = lp.integrate(|v| l.support(v).powf(p)) / p;
    let zero = lp_combination(p, T::one(), k, T::zero(), l, grid)?;
    let g0 = zero.gaussian_volume(ctx)?;
    let mut estimates = Vec::with_capacity(t_steps.len());
    for &t in t_steps {
        if !(t > T::zero()) {
            return Err(Error::InvalidInput(format!("step sizes must be positive, got {t}")));
        }
        let plus = lp_combination(p, T::one(), k, t, l, grid)?.gaussian_volume(ctx)?;
        let minus = lp_combination(p, T::one(), k, -t, l, grid)?.gaussian_volume(ctx)?;
        let central = (plus - minus) / (T::lit(2.0) * t);
        let abs_error = (central - rhs).abs();
        estimates.push(VariationalEstimate {
            t,
            central,
            forward: (plus - g0) / t,
            backward: (g0 - minus) / t,
            abs_error,
            rel_error: abs_error / rhs.abs(),
        });
    }
    Ok(VariationalReport { rhs, gauss_volume: g0, estimates })
}
