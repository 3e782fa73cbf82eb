//! Direction sets and quadrature on the unit sphere S^{n-1}, n = 2 or 3.

use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};

pub const MIN_RESOLUTION: usize = 4;
pub const DEFAULT_RESOLUTION_2D: usize = 720;
pub const DEFAULT_RESOLUTION_3D: usize = 2000;

/// Quadrature nodes and weights on S^{n-1}.
///
/// For n = 2 the nodes are equally spaced angles `2πk/N`; for n = 3 they form
/// a Fibonacci spiral with equal weights `4π/N`. A grid is fully determined by
/// `(dim, resolution)`.
#[derive(Debug, Clone)]
pub struct SphericalGrid<T> {
    dim: usize,
    resolution: usize,
    nodes: Vec<Vec3<T>>,
    weights: Vec<T>,
}

impl<T: Real> SphericalGrid<T> {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooSmall { resolution, minimum: MIN_RESOLUTION });
        }
        let nf = T::from_usize_lossy(resolution);
        let (nodes, weights) = match dim {
            2 => {
                let step = T::TAU() / nf;
                let nodes = (0..resolution).map(|k| Vec3::from_angle(step * T::from_usize_lossy(k))).collect();
                (nodes, vec![step; resolution])
            }
            3 => {
                let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
                let two = T::lit(2.0);
                let nodes = (0..resolution)
                    .map(|k| {
                        let kf = T::from_usize_lossy(k);
                        let z = T::one() - (two * kf + T::one()) / nf;
                        let r = (T::one() - z * z).max(T::zero()).sqrt();
                        let phi = golden * kf;
                        Vec3::new(r * phi.cos(), r * phi.sin(), z)
                    })
                    .collect();
                (nodes, vec![T::lit(4.0) * T::PI() / nf; resolution])
            }
            d => return Err(Error::UnsupportedDimension(d)),
        };
        Ok(Self { dim, resolution, nodes, weights })
    }

    /// Grid with the default resolution for the dimension.
    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            2 => Self::new(2, DEFAULT_RESOLUTION_2D),
            3 => Self::new(3, DEFAULT_RESOLUTION_3D),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn nodes(&self) -> &[Vec3<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Angular spacing of a planar grid.
    pub fn angular_step(&self) -> Option<T> {
        (self.dim == 2).then(|| T::TAU() / T::from_usize_lossy(self.resolution))
    }

    /// Surface measure of S^{n-1}.
    pub fn sphere_area(&self) -> T {
        sphere_area(self.dim)
    }

    /// `Σ w_k f(u_k)`; fails on the first non-finite integrand value.
    pub fn integrate<F: FnMut(Vec3<T>) -> T>(&self, mut f: F) -> Result<T> {
        let mut acc = T::zero();
        for (index, (u, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(*u);
            if !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
            acc += *w * v;
        }
        Ok(acc)
    }

    /// Checks the structural invariants of the grid.
    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(1e-12);
        for (index, u) in self.nodes.iter().enumerate() {
            let norm = u.norm();
            if (norm - T::one()).abs() > tol {
                return Err(Error::NotUnit { index, norm: norm.to_f64_lossy() });
            }
        }
        if let Some(index) = self.weights.iter().position(|w| *w <= T::zero()) {
            return Err(Error::InvalidInput(format!("weight {index} not positive")));
        }
        let total: T = self.weights.iter().copied().sum();
        if (total - self.sphere_area()).abs() > T::lit(1e-9) {
            return Err(Error::Inconsistent(format!("weights sum to {total}")));
        }
        if let Some(w) = hemisphere_witness(self.dim, &self.nodes, T::zero()) {
            return Err(Error::Hemisphere { witness: w.to_vec(self.dim).iter().map(|x| x.to_f64_lossy()).collect() });
        }
        Ok(())
    }
}

/// Surface measure of S^{n-1} for n = 2, 3 (0 otherwise).
pub fn sphere_area<T: Real>(dim: usize) -> T {
    match dim {
        2 => T::TAU(),
        3 => T::lit(4.0) * T::PI(),
        _ => T::zero(),
    }
}

/// Returns a unit `u` with `u·v ≤ tol` for every direction `v`, i.e. a
/// witness that the directions lie in a closed hemisphere, or `None` when no
/// such `u` exists.
pub fn hemisphere_witness<T: Real>(dim: usize, dirs: &[Vec3<T>], tol: T) -> Option<Vec3<T>> {
    let fallback = if dim == 2 { Vec3::planar(T::one(), T::zero()) } else { Vec3::new(T::zero(), T::zero(), T::one()) };
    if dirs.len() <= dim {
        // at most n vectors never positively span R^n
        return Some(match dirs.first() {
            Some(v) if dirs.len() == 1 => -*v,
            _ => witness_by_pairs(dim, dirs, tol).unwrap_or(fallback),
        });
    }
    match dim {
        2 => {
            let mut angles: Vec<T> = dirs.iter().map(|v| v.angle()).collect();
            angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
            let n = angles.len();
            let mut best = (T::zero(), 0usize);
            for i in 0..n {
                let next = if i + 1 < n { angles[i + 1] } else { angles[0] + T::TAU() };
                let gap = next - angles[i];
                if gap > best.0 {
                    best = (gap, i);
                }
            }
            let (gap, i) = best;
            // a gap of at least π leaves an empty open half-circle
            if gap >= T::PI() - tol {
                let mid = angles[i] + gap / T::lit(2.0);
                return Some(Vec3::from_angle(mid));
            }
            None
        }
        3 => witness_by_pairs(dim, dirs, tol),
        _ => Some(fallback),
    }
}

// Extreme rays of {u : u·v ≤ 0 ∀v} are cross products of two directions, or
// the normal of their common plane when they are coplanar.
fn witness_by_pairs<T: Real>(dim: usize, dirs: &[Vec3<T>], tol: T) -> Option<Vec3<T>> {
    if dim == 2 {
        for v in dirs {
            for cand in [v.perp(), -v.perp()] {
                if dirs.iter().all(|w| cand.dot(*w) <= tol) {
                    return Some(cand);
                }
            }
        }
        return None;
    }
    let eps = T::lit(1e-12);
    let mut plane_normal = None;
    'outer: for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            if let Some(n) = a.cross(*b).normalized() {
                if a.cross(*b).norm() > eps {
                    plane_normal = Some(n);
                    break 'outer;
                }
            }
        }
    }
    let Some(n0) = plane_normal else {
        // all directions parallel
        let v = dirs.first().copied().unwrap_or(Vec3::new(T::one(), T::zero(), T::zero()));
        let helper = if v.x.abs() < T::lit(0.9) { Vec3::new(T::one(), T::zero(), T::zero()) } else { Vec3::new(T::zero(), T::one(), T::zero()) };
        return v.cross(helper).normalized();
    };
    if dirs.iter().all(|v| v.dot(n0).abs() <= tol.max(eps)) {
        return Some(n0);
    }
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            let Some(c) = a.cross(*b).normalized() else { continue };
            for cand in [c, -c] {
                if dirs.iter().all(|v| cand.dot(*v) <= tol) {
                    return Some(cand);
                }
            }
        }
    }
    None
}
