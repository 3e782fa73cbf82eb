//! Reference computations shared by the integration tests. None of these
//! call into the library's quadrature.

#![allow(dead_code)]

use gmink::{Polytope, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TAU: f64 = std::f64::consts::TAU;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn phi(x: f64) -> f64 {
    (-x * x / 2.0).exp() / TAU.sqrt()
}

/// `Φ(b) − Φ(a)` by Simpson quadrature of the normal density.
pub fn normal_mass(a: f64, b: f64) -> f64 {
    simpson(phi, a, b, 20_000)
}

pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let up = f(hi) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == up {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Total L_p Gaussian surface mass of `r·B_2`: `r^{2−p} e^{−r²/2}`.
pub fn planar_ball_mass(p: f64, r: f64) -> f64 {
    r.powf(2.0 - p) * (-r * r / 2.0).exp()
}

/// Radius `r` with `γ_2(r B_2) ≥ 1/2` and `planar_ball_mass(p, r) = total`,
/// i.e. the root beyond `√(2 ln 2)`.
pub fn planar_ball_radius(total: f64, p: f64) -> f64 {
    let r_half = (2.0 * 2f64.ln()).sqrt();
    let lo = if p < 2.0 { r_half.max((2.0 - p).sqrt()) } else { r_half };
    bisect(|r| planar_ball_mass(p, r) - total, lo, 12.0)
}

/// Gaussian volume of `[−a, a]^n` as a product of 1-D masses.
pub fn cube_volume(n: i32, a: f64) -> f64 {
    normal_mass(-a, a).powi(n)
}

/// Gaussian facet mass of `[−a, a]^n` on one facet.
pub fn cube_atom(n: i32, a: f64) -> f64 {
    phi(a) * normal_mass(-a, a).powi(n - 1)
}

/// Random planar polytope with no redundant constraint: `m` random normals
/// with no angular gap of `0.8π` or more and support numbers in
/// `[h_lo, h_hi]`, with touching and short facets dropped afterwards. The gap
/// bound keeps every vertex within `h_hi / cos(0.4π)` of the origin.
pub fn random_polygon(rng: &mut ChaCha8Rng, h_lo: f64, h_hi: f64) -> Polytope<f64> {
    loop {
        let m = rng.gen_range(3..=10);
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if max_gap(&angles) >= 0.8 * std::f64::consts::PI {
            continue;
        }
        let normals: Vec<Vec3<f64>> = angles.iter().map(|t| Vec3::from_angle(*t)).collect();
        let h: Vec<f64> = (0..m).map(|_| rng.gen_range(h_lo..h_hi)).collect();
        let Ok(body) = Polytope::wulff(2, normals.clone(), h.clone()) else { continue };
        let keep: Vec<usize> = (0..m).filter(|i| !body.is_redundant(*i) && body.facet_area(*i) > 0.05).collect();
        let kept: Vec<f64> = keep.iter().map(|i| angles[*i]).collect();
        if keep.len() < 3 || max_gap(&kept) >= 0.8 * std::f64::consts::PI {
            continue;
        }
        let actual = body.actual_support_numbers();
        if let Ok(trimmed) =
            Polytope::wulff(2, keep.iter().map(|i| normals[*i]).collect(), keep.iter().map(|i| actual[*i]).collect())
        {
            if trimmed.redundant_indices().is_empty() {
                return trimmed;
            }
        }
    }
}

/// Largest gap between consecutive sorted angles around the circle.
fn max_gap(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    (0..m)
        .map(|i| if i + 1 < m { sorted[i + 1] - sorted[i] } else { sorted[0] + TAU - sorted[i] })
        .fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Total L_p Gaussian surface mass of the regular `sides`-gon with inradius
/// `r`, facet normals at the grid angles.
pub fn regular_polygon_mass(sides: usize, p: f64, r: f64) -> f64 {
    let half = r * (std::f64::consts::PI / sides as f64).tan();
    sides as f64 * r.powf(1.0 - p) * phi(r) * normal_mass(-half, half)
}

/// Inradius on the `γ ≥ 1/2` branch whose regular polygon carries `total`.
pub fn regular_polygon_radius(sides: usize, total: f64, p: f64) -> f64 {
    let r_half = (2.0 * 2f64.ln()).sqrt();
    let lo = if p < 2.0 { r_half.max((2.0 - p).sqrt()) } else { r_half };
    bisect(|r| regular_polygon_mass(sides, p, r) - total, lo, 12.0)
}
