use crate::error::{Error, Result};
use crate::gaussian::{lp_surface_measure, GaussianContext, SphereMeasure};
use crate::scalar::Real;

use super::{SolverReport, VOLUME_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySummary<T> {
    pub max_deviation: T,
    pub total_variation: T,
    pub gauss_volume: T,
    /// `γ_n(K) ≥ 1/2 − 1e-9`.
    pub volume_ok: bool,
}

/// Recomputes `S_{p,γ_n}(K,·)` for the reported body with a refined facet
/// quadrature and compares it with `mu` atom by atom.
pub fn verify_solution<T: Real>(
    ctx: &GaussianContext<T>,
    report: &SolverReport<T>,
    mu: &SphereMeasure<T>,
    p: T,
) -> Result<VerifySummary<T>> {
    let fine = ctx.refined()?;
    let body = &report.solution;
    if body.len() != mu.len() {
        return Err(Error::InvalidInput(format!("solution has {} facets, measure has {} atoms", body.len(), mu.len())));
    }
    let measure = lp_surface_measure(&fine, body, p)?;
    let gauss_volume = crate::gaussian::gaussian_volume(&fine, body)?;
    Ok(VerifySummary {
        max_deviation: measure.max_mass_deviation(mu)?,
        total_variation: measure.total_variation(mu)?,
        gauss_volume,
        volume_ok: gauss_volume >= T::lit(VOLUME_FLOOR),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::Polytope;
    use crate::solver::{solve_discrete, SolverConfig};

    #[test]
    fn flags_perturbed_solution() {
        let ctx = GaussianContext::<f64>::new(2).unwrap();
        let k0 = Polytope::regular_polygon(5, 1.3).unwrap();
        let mu = lp_surface_measure(&ctx, &k0, 1.0).unwrap();
        let mut rep = solve_discrete(&ctx, &mu, 1.0, &SolverConfig::default()).unwrap();
        let good = verify_solution(&ctx, &rep, &mu, 1.0).unwrap();
        assert!(good.max_deviation <= 1e-8 && good.volume_ok);
        let noisy: Vec<f64> =
            rep.solution.support_numbers().iter().enumerate().map(|(i, h)| h + 1e-3 * (-1f64).powi(i as i32)).collect();
        rep.solution = rep.solution.with_support_numbers(noisy).unwrap();
        let bad = verify_solution(&ctx, &rep, &mu, 1.0).unwrap();
        assert!(bad.max_deviation > 1e-5);
    }
}
