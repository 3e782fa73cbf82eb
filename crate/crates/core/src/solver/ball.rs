use crate::convex::Ball;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianBody, GaussianContext};
use crate::scalar::Real;
use crate::sphere_grid::sphere_area;

use super::VOLUME_FLOOR;

/// Rotationally symmetric solution of the problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSolution<T> {
    /// Every positive root of the profile equation, ascending.
    pub roots: Vec<T>,
    pub radius: T,
    pub gauss_volume: T,
    pub note: String,
}

/// Total L_p Gaussian surface mass of `r·B_n`:
/// `|S^{n-1}| (√(2π))^{-n} r^{n-p} e^{-r²/2}`.
pub fn ball_profile<T: Real>(dim: usize, p: T, r: T) -> T {
    let n = T::from_usize_lossy(dim);
    sphere_area::<T>(dim) * T::TAU().powf(-n / T::lit(2.0)) * r.powf(n - p) * (-r * r / T::lit(2.0)).exp()
}

fn bisect<T: Real, F: Fn(T) -> T>(mut lo: T, mut hi: T, f: F) -> T {
    let mut f_lo = f(lo);
    for _ in 0..400 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Smallest `hi > lo` with `f(hi) < 0` for a profile decaying to 0.
fn decaying_bracket<T: Real, F: Fn(T) -> T>(lo: T, f: &F) -> T {
    let mut hi = lo.max(T::one()) * T::lit(2.0);
    while f(hi) >= T::zero() && hi < T::lit(1e3) {
        hi = hi * T::lit(2.0);
    }
    hi
}

/// Solves `ball_profile(n, p, r) = total_mass` for all roots and selects the
/// one with `γ_n(r·B_n) ≥ 1/2`.
///
/// For `p < n` the profile rises to its maximum at `√(n−p)` and then decays,
/// so there are up to two roots; for `p ≥ n` it is decreasing and there is at
/// most one. When both roots qualify the larger is taken and the note says so.
pub fn solve_ball<T: Real>(ctx: &GaussianContext<T>, total_mass: T, p: T, dim: usize) -> Result<BallSolution<T>> {
    if ctx.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: ctx.dim() });
    }
    if !(total_mass > T::zero()) || !total_mass.is_finite() {
        return Err(Error::InvalidInput(format!("total mass must be positive, got {total_mass}")));
    }
    if !(p >= T::one()) {
        return Err(Error::InvalidInput(format!("exponent p must be >= 1, got {p}")));
    }
    let n = T::from_usize_lossy(dim);
    let f = |r: T| ball_profile(dim, p, r) - total_mass;
    let mut roots = Vec::new();
    if p < n {
        let peak = (n - p).sqrt();
        let profile_max = ball_profile(dim, p, peak);
        let rel = (total_mass - profile_max) / profile_max;
        if rel > T::lit(1e-12) {
            return Err(Error::NoRoot { total_mass: total_mass.to_f64_lossy(), profile_max: profile_max.to_f64_lossy() });
        }
        if rel.abs() <= T::lit(1e-12) {
            roots.push(peak);
        } else {
            roots.push(bisect(T::zero(), peak, f));
            roots.push(bisect(peak, decaying_bracket(peak, &f), f));
        }
    } else if p == n {
        let profile_max = ball_profile(dim, p, T::zero());
        if total_mass >= profile_max {
            return Err(Error::NoRoot { total_mass: total_mass.to_f64_lossy(), profile_max: profile_max.to_f64_lossy() });
        }
        roots.push(bisect(T::zero(), decaying_bracket(T::zero(), &f), f));
    } else {
        let mut lo = T::one();
        while f(lo) <= T::zero() && lo > T::lit(1e-300) {
            lo = lo / T::lit(2.0);
        }
        roots.push(bisect(lo, decaying_bracket(lo, &f), f));
    }

    let volumes: Vec<T> =
        roots.iter().map(|r| Ball::new(dim, *r).and_then(|b| b.gaussian_volume(ctx))).collect::<Result<_>>()?;
    let floor = T::lit(VOLUME_FLOOR);
    let valid: Vec<usize> = (0..roots.len()).filter(|i| volumes[*i] >= floor).collect();
    let describe = |rs: &[T]| rs.iter().map(|r| format!("{r}")).collect::<Vec<_>>().join(", ");
    let Some(&pick) = valid.last() else {
        return Err(Error::NoValidBranch { roots: roots.iter().map(|r| r.to_f64_lossy()).collect() });
    };
    let note = match (roots.len(), valid.len()) {
        (1, _) => format!("1 root ({}); selected it", describe(&roots)),
        (_, 1) => format!("2 roots ({}); selected {} (the other has gaussian volume below 1/2)", describe(&roots), roots[pick]),
        _ => format!("2 roots ({}); both have gaussian volume >= 1/2, selected the larger", describe(&roots)),
    };
    Ok(BallSolution { radius: roots[pick], gauss_volume: volumes[pick], roots, note })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_mass_selects_large_root() {
        let ctx = GaussianContext::<f64>::new(2).unwrap();
        let s = solve_ball(&ctx, 0.5, 1.0, 2).unwrap();
        assert_eq!(s.roots.len(), 2);
        assert!((s.roots[0] - 0.597831879529).abs() < 1e-10);
        assert!((s.radius - 1.467410087232).abs() < 1e-10);
        assert!((s.gauss_volume - 0.659263620749).abs() < 1e-10);
    }

    #[test]
    fn profile_maximum_has_no_valid_branch() {
        let ctx = GaussianContext::<f64>::new(2).unwrap();
        let err = solve_ball(&ctx, (-0.5f64).exp(), 1.0, 2).unwrap_err();
        match err {
            Error::NoValidBranch { roots } => {
                assert_eq!(roots.len(), 1);
                assert!((roots[0] - 1.0).abs() < 1e-12);
            }
            e => panic!("{e}"),
        }
        assert!(matches!(solve_ball(&ctx, 0.7, 1.0, 2), Err(Error::NoRoot { .. })));
    }

    #[test]
    fn monotone_profile_has_single_root() {
        let ctx = GaussianContext::<f64>::new(2).unwrap();
        let err = solve_ball(&ctx, (-0.5f64).exp(), 2.0, 2).unwrap_err();
        assert!(matches!(err, Error::NoValidBranch { ref roots } if roots.len() == 1 && (roots[0] - 1.0).abs() < 1e-12));
        let s = solve_ball(&ctx, 0.2, 3.0, 2).unwrap();
        assert_eq!(s.roots.len(), 1);
        assert!((ball_profile(2, 3.0, s.radius) - 0.2).abs() < 1e-14);
    }
}
