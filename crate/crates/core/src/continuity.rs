//! Continuity experiments: families of measures or exponents converging to a
//! limit, solved instance by instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::convex::{hausdorff_distance, max_radial, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::gaussian::{lp_surface_measure, Atom, GaussianContext, SphereMeasure};
use crate::scalar::{Real, Vec3};
use crate::solver::{solve_discrete, SolverConfig, SolverReport};
use crate::sphere_grid::SphericalGrid;

/// Number of hinge functions `u ↦ (u·d)_+` in the standard rule.
pub const HINGE_COUNT: usize = 16;

/// Finite family of Lipschitz test functions; the distance between two
/// measures is the largest difference of their integrals over the family.
///
/// The family is the constant 1, the coordinates `u_j`, the products
/// `u_j u_k` (`j ≤ k`) and the hinges `(u·d)_+`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakDistanceRule<T> {
    dim: usize,
    hinges: Vec<Vec3<T>>,
}

impl<T: Real> WeakDistanceRule<T> {
    /// 16 hinge directions: equally spaced angles in the plane, a Fibonacci
    /// set in space.
    pub fn standard(dim: usize) -> Result<Self> {
        let grid = SphericalGrid::new(dim, HINGE_COUNT)?;
        Ok(Self { dim, hinges: grid.nodes().to_vec() })
    }

    pub fn with_hinges(dim: usize, hinges: Vec<Vec3<T>>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (index, d) in hinges.iter().enumerate() {
            if (d.norm() - T::one()).abs() > T::lit(crate::convex::UNIT_TOL) {
                return Err(Error::NotUnit { index, norm: d.norm().to_f64_lossy() });
            }
        }
        Ok(Self { dim, hinges })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hinges(&self) -> &[Vec3<T>] {
        &self.hinges
    }

    /// Values of every test function at `u`.
    pub fn evaluate(&self, u: Vec3<T>) -> Vec<T> {
        let c = u.to_vec(self.dim);
        let mut out = Vec::with_capacity(1 + self.dim + self.dim * (self.dim + 1) / 2 + self.hinges.len());
        out.push(T::one());
        out.extend_from_slice(&c);
        for j in 0..self.dim {
            for k in j..self.dim {
                out.push(c[j] * c[k]);
            }
        }
        out.extend(self.hinges.iter().map(|d| u.dot(*d).max(T::zero())));
        out
    }

    fn integrals(&self, mu: &SphereMeasure<T>) -> Vec<T> {
        let mut acc = vec![T::zero(); 1 + self.dim + self.dim * (self.dim + 1) / 2 + self.hinges.len()];
        for a in mu.atoms() {
            for (s, f) in acc.iter_mut().zip(self.evaluate(a.direction)) {
                *s += a.mass * f;
            }
        }
        acc
    }
}

/// `max_f |∫ f dμ − ∫ f dν|` over the rule's test family.
pub fn weak_distance<T: Real>(mu: &SphereMeasure<T>, nu: &SphereMeasure<T>, rule: &WeakDistanceRule<T>) -> Result<T> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { left: mu.dim(), right: nu.dim() });
    }
    if mu.dim() != rule.dim() {
        return Err(Error::DimensionMismatch { left: mu.dim(), right: rule.dim() });
    }
    let a = rule.integrals(mu);
    let b = rule.integrals(nu);
    Ok(a.iter().zip(&b).map(|(x, y)| (*x - *y).abs()).fold(T::zero(), T::max))
}

/// One solved instance of an experiment family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRecord<T> {
    pub index: usize,
    /// Perturbation size δ_i or exponent p_i.
    pub parameter: T,
    pub weak_distance: T,
    pub hausdorff_distance: T,
    pub gauss_volume: T,
    pub max_radial: T,
    /// `min_u h_{K_i}(u)` over the grid.
    pub min_support: T,
    pub iterations: usize,
}

/// Seeded jitter pattern, one entry per atom, each coordinate in `[-1, 1]`.
#[derive(Debug, Clone)]
struct Jitter {
    mass: Vec<f64>,
    angle: Vec<f64>,
    axis: Vec<f64>,
}

impl Jitter {
    fn draw(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut jitter = Self { mass: Vec::with_capacity(len), angle: Vec::with_capacity(len), axis: Vec::with_capacity(len) };
        for _ in 0..len {
            jitter.mass.push(rng.gen_range(-1.0..=1.0));
            jitter.angle.push(rng.gen_range(-1.0..=1.0));
            jitter.axis.push(rng.gen_range(-1.0..=1.0));
        }
        jitter
    }
}

/// `μ` with masses scaled by `1 + δξ_j` and directions turned by `δη_j`
/// radians (about a seeded axis perpendicular to the atom in space).
fn perturb<T: Real>(mu: &SphereMeasure<T>, jitter: &Jitter, delta: T) -> Result<SphereMeasure<T>> {
    let atoms = mu
        .atoms()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let turn = delta * T::lit(jitter.angle[j]);
            let direction = match mu.dim() {
                2 => Vec3::from_angle(a.direction.angle() + turn),
                _ => {
                    let v = a.direction;
                    let helper = if v.x.abs() < T::lit(0.9) { Vec3::new(T::one(), T::zero(), T::zero()) } else { Vec3::new(T::zero(), T::one(), T::zero()) };
                    let e1 = v.cross(helper).normalized().expect("helper not parallel");
                    let e2 = v.cross(e1);
                    let psi = T::PI() * T::lit(jitter.axis[j]);
                    let w = e1 * psi.cos() + e2 * psi.sin();
                    (v * turn.cos() + w * turn.sin()).normalized().expect("unit rotation")
                }
            };
            Atom { direction, mass: a.mass * (T::one() + delta * T::lit(jitter.mass[j])) }
        })
        .collect();
    SphereMeasure::discrete(mu.dim(), atoms)
}

fn record<T: Real>(
    ctx: &GaussianContext<T>,
    (index, parameter, weak): (usize, T, T),
    rep: &SolverReport<T>,
    limit: &Polytope<T>,
) -> Result<ExperimentRecord<T>> {
    let grid = ctx.grid();
    let solution = &rep.solution;
    let min_support = grid.nodes().iter().map(|u| solution.support(*u)).fold(T::infinity(), T::min);
    Ok(ExperimentRecord {
        index,
        parameter,
        weak_distance: weak,
        hausdorff_distance: hausdorff_distance(solution, limit, grid)?,
        gauss_volume: rep.gauss_volume,
        max_radial: max_radial(solution, grid)?.radius,
        min_support,
        iterations: rep.iterations,
    })
}

fn wrap<T>(index: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Experiment { index, source: Box::new(e) })
}

/// Perturbs `μ₀ = S_{p,γ_n}(K0,·)` by each `δ_i` with one seeded jitter
/// pattern, solves `S_{p,γ_n}(K_i,·) = μ_i` and compares `K_i` with `K0`.
///
/// Instances are solved in parallel; records come back in schedule order.
pub fn run_measure_continuity<T: Real>(
    ctx: &GaussianContext<T>,
    k0: &Polytope<T>,
    p: T,
    schedule: &[T],
    cfg: &SolverConfig<T>,
    seed: u64,
) -> Result<Vec<ExperimentRecord<T>>> {
    cfg.validate()?;
    if let Some(index) = schedule.iter().position(|d| !(*d >= T::zero()) || !d.is_finite()) {
        return Err(Error::InvalidInput(format!("perturbation size {index} must be a nonnegative number")));
    }
    let mu0 = lp_surface_measure(ctx, k0, p)?;
    let rule = WeakDistanceRule::standard(ctx.dim())?;
    let jitter = Jitter::draw(mu0.len(), seed);
    schedule
        .par_iter()
        .enumerate()
        .map(|(index, &delta)| {
            wrap(index, (|| {
                let mu = perturb(&mu0, &jitter, delta)?;
                let weak = weak_distance(&mu, &mu0, &rule)?;
                let rep = solve_discrete(ctx, &mu, p, cfg)?;
                record(ctx, (index, delta, weak), &rep, k0)
            })())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Fixes `μ = S_{p0,γ_n}(K0,·)` and solves `S_{p_i,γ_n}(K_i,·) = μ` for each
/// exponent; requires `1 ≤ p_i < 2 p0`.
///
/// The weak distance recorded is between `S_{p0,γ_n}(K_i,·)` and `μ`.
pub fn run_p_continuity<T: Real>(
    ctx: &GaussianContext<T>,
    k0: &Polytope<T>,
    p0: T,
    schedule: &[T],
    cfg: &SolverConfig<T>,
) -> Result<Vec<ExperimentRecord<T>>> {
    cfg.validate()?;
    if !(p0 >= T::one()) {
        return Err(Error::InvalidInput(format!("p0 must be >= 1, got {p0}")));
    }
    let bound = T::lit(2.0) * p0;
    if let Some(index) = schedule.iter().position(|p| !(*p >= T::one() && *p < bound)) {
        return Err(Error::InvalidInput(format!(
            "exponent {} at step {index} violates 1 <= p_i < 2 p0 = {bound}",
            schedule[index]
        )));
    }
    let mu = lp_surface_measure(ctx, k0, p0)?;
    let rule = WeakDistanceRule::standard(ctx.dim())?;
    schedule
        .par_iter()
        .enumerate()
        .map(|(index, &p)| {
            wrap(index, (|| {
                let rep = solve_discrete(ctx, &mu, p, cfg)?;
                let back = lp_surface_measure(ctx, &rep.solution, p0)?;
                let weak = weak_distance(&back, &mu, &rule)?;
                record(ctx, (index, p, weak), &rep, k0)
            })())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
