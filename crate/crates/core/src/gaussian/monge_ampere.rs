use crate::convex::{ConvexBody, SupportFunction};
use crate::error::{Error, Result};
use crate::scalar::{normal_interval, Real};

use super::body::check_exponent;
use super::GaussianContext;

/// Relative tolerance on `h'' + h` before a value counts as negative curvature.
const CURVATURE_TOL: f64 = 1e-8;

struct Stencil<'a, T> {
    values: &'a [T],
    step: T,
    tol: T,
}

impl<'a, T: Real> Stencil<'a, T> {
    fn new(h: &'a SupportFunction<T>) -> Result<Self> {
        if h.dim() != 2 {
            return Err(Error::UnsupportedDimension(h.dim()));
        }
        let step = h.grid().angular_step().ok_or(Error::UnsupportedDimension(h.dim()))?;
        let scale = h.values().iter().copied().fold(T::zero(), T::max);
        Ok(Self { values: h.values(), step, tol: T::lit(CURVATURE_TOL) * scale })
    }

    fn at(&self, k: isize) -> T {
        let n = self.values.len() as isize;
        self.values[k.rem_euclid(n) as usize]
    }
}

fn check_ctx<T: Real>(ctx: &GaussianContext<T>) -> Result<()> {
    if ctx.dim() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: ctx.dim() });
    }
    Ok(())
}

/// Pointwise density `(2π)^{-1} e^{-(h'² + h²)/2} h^{1-p} (h'' + h)` at grid
/// node `k`, with second-order central differences on the periodic grid.
pub fn ma_density<T: Real>(ctx: &GaussianContext<T>, h: &SupportFunction<T>, p: T, k: usize) -> Result<T> {
    check_ctx(ctx)?;
    check_exponent(p)?;
    let s = Stencil::new(h)?;
    if k >= s.values.len() {
        return Err(Error::InvalidInput(format!("node {k} outside grid of {}", s.values.len())));
    }
    let index = k;
    let k = k as isize;
    let (hm, h0, hp) = (s.at(k - 1), s.at(k), s.at(k + 1));
    let d1 = (hp - hm) / (T::lit(2.0) * s.step);
    let d2 = (hp - T::lit(2.0) * h0 + hm) / (s.step * s.step);
    let curvature = d2 + h0;
    if curvature < -s.tol {
        return Err(Error::NegativeCurvature { index, value: curvature.to_f64_lossy() });
    }
    let curvature = curvature.max(T::zero());
    Ok(ctx.normalization() * (-(d1 * d1 + h0 * h0) / T::lit(2.0)).exp() * h0.powf(T::one() - p) * curvature)
}

/// Mass of the L_p Gaussian surface measure on the angular cell of every node.
///
/// The `e^{-h'²/2} h''` part is integrated exactly in the variable `h'`
/// between the one-sided differences, so kinks of polygonal support functions
/// contribute their full facet mass; the remaining `e^{-(h'²+h²)/2} h` part
/// uses the trapezoid rule over the two half cells.
pub fn ma_sector_masses<T: Real>(ctx: &GaussianContext<T>, h: &SupportFunction<T>, p: T) -> Result<Vec<T>> {
    check_ctx(ctx)?;
    check_exponent(p)?;
    let s = Stencil::new(h)?;
    let half = T::lit(0.5);
    let root_tau = T::TAU().sqrt();
    let mut out = Vec::with_capacity(s.values.len());
    for (index, k) in (0..s.values.len() as isize).enumerate() {
        let (hm, h0, hp) = (s.at(k - 1), s.at(k), s.at(k + 1));
        let d_lo = (h0 - hm) / s.step;
        let d_hi = (hp - h0) / s.step;
        let curvature = (d_hi - d_lo) / s.step + h0;
        if curvature < -s.tol {
            return Err(Error::NegativeCurvature { index, value: curvature.to_f64_lossy() });
        }
        let flux = if d_hi > d_lo { root_tau * normal_interval(d_lo, d_hi) } else { -root_tau * normal_interval(d_hi, d_lo) };
        let flux = (-h0 * h0 * half).exp() * flux;
        let (h_lo, h_hi) = ((h0 + hm) * half, (h0 + hp) * half);
        let w_lo = (-(d_lo * d_lo + h_lo * h_lo) * half).exp();
        let w_hi = (-(d_hi * d_hi + h_hi * h_hi) * half).exp();
        let body = (w_lo + w_hi) * half * h0 * s.step;
        let mass = ctx.normalization() * h0.powf(T::one() - p) * (flux + body);
        out.push(mass.max(T::zero()));
    }
    Ok(out)
}

/// Sum of [`ma_sector_masses`] over the nodes whose angle lies in `[a, b)`.
pub fn ma_sector_mass<T: Real>(ctx: &GaussianContext<T>, h: &SupportFunction<T>, p: T, a: T, b: T) -> Result<T> {
    let masses = ma_sector_masses(ctx, h, p)?;
    let tau = T::TAU();
    let width = b - a;
    Ok(h.grid()
        .nodes()
        .iter()
        .zip(masses)
        .filter(|(u, _)| {
            let offset = u.angle() - a;
            offset - tau * (offset / tau).floor() < width
        })
        .map(|(_, m)| m)
        .sum())
}
