use rayon::prelude::*;

use crate::convex::{max_radial, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::gaussian::{facet_gauss_mass, GaussianBody, GaussianContext, SphereMeasure, MIN_SUPPORT_FOR_LP};
use crate::linalg::DenseMatrix;
use crate::scalar::{normal_interval, Real, Vec3};
use crate::sphere_grid::hemisphere_witness;

use super::{
    Initialization, JacobianKind, SolverConfig, SolverReport, TraceEntry, ITERATE_VOLUME_FLOOR, RESTART_RADII,
    VOLUME_FLOOR,
};

const FD_STEP: f64 = 1e-6;
const MAX_HALVINGS: usize = 40;

struct Problem<'a, T> {
    ctx: &'a GaussianContext<T>,
    normals: Vec<Vec3<T>>,
    target: Vec<T>,
    p: T,
}

struct State<T> {
    h: Vec<T>,
    body: Polytope<T>,
    residual_vec: Vec<T>,
    residual: T,
    gauss_volume: T,
}

enum AttemptError {
    /// The line search could only progress through iterates with small
    /// Gaussian volume.
    LowVolume(f64),
    Other(Error),
}

impl From<Error> for AttemptError {
    fn from(e: Error) -> Self {
        AttemptError::Other(e)
    }
}

fn inf_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

impl<'a, T: Real> Problem<'a, T> {
    /// `S_{p,γ_n}([h], u_i)` for every `i`, together with `[h]`.
    fn forward(&self, h: &[T]) -> Result<(Polytope<T>, Vec<T>)> {
        let body = Polytope::wulff(self.ctx.dim(), self.normals.clone(), h.to_vec())?;
        let floor = T::lit(MIN_SUPPORT_FOR_LP);
        let masses = (0..h.len())
            .map(|i| {
                let m = facet_gauss_mass(self.ctx, &body, i);
                if self.p == T::one() || m == T::zero() {
                    return Ok(m);
                }
                if h[i] < floor {
                    return Err(Error::OriginTooClose { min_support: h[i].to_f64_lossy() });
                }
                Ok(m * h[i].powf(T::one() - self.p))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok((body, masses))
    }

    fn residual(&self, masses: &[T]) -> Vec<T> {
        masses.iter().zip(&self.target).map(|(m, t)| *m - *t).collect()
    }

    /// Evaluates a candidate iterate, clamping redundant constraints to the
    /// body's actual support values.
    fn state(&self, h: Vec<T>) -> Result<State<T>> {
        let mut body = Polytope::wulff(self.ctx.dim(), self.normals.clone(), h.clone())?;
        let mut h = h;
        if body.facets().iter().any(|f| f.redundant) {
            let actual = body.actual_support_numbers();
            for i in body.redundant_indices() {
                h[i] = actual[i].min(h[i]);
            }
            body = Polytope::wulff(self.ctx.dim(), self.normals.clone(), h.clone())?;
        }
        let (_, masses) = self.forward(&h)?;
        let residual_vec = self.residual(&masses);
        let residual = inf_norm(&residual_vec);
        let gauss_volume = body.gaussian_volume(self.ctx)?;
        Ok(State { h, body, residual_vec, residual, gauss_volume })
    }

    fn jacobian(&self, state: &State<T>, kind: JacobianKind) -> Result<DenseMatrix<T>> {
        if kind == JacobianKind::N2Analytic && self.ctx.dim() == 2 && !state.body.facets().iter().any(|f| f.redundant)
        {
            return Ok(self.analytic_jacobian(state));
        }
        self.fd_jacobian(state)
    }

    fn fd_jacobian(&self, state: &State<T>) -> Result<DenseMatrix<T>> {
        let m = state.h.len();
        let (_, base) = self.forward(&state.h)?;
        let columns: Vec<Vec<T>> = (0..m)
            .into_par_iter()
            .map(|j| {
                // shrinking keeps a touching constraint active
                let step = -T::lit(FD_STEP) * state.h[j];
                let mut h = state.h.clone();
                h[j] += step;
                let (_, masses) = self.forward(&h)?;
                Ok(masses.iter().zip(&base).map(|(a, b)| (*a - *b) / step).collect())
            })
            .collect::<Result<_>>()?;
        let mut jac = DenseMatrix::zeros(m);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                jac.set(i, j, *v);
            }
        }
        Ok(jac)
    }

    /// Planar facet `i` spans tangential coordinates `[a_i, b_i]` along
    /// `u_i^⊥` with `b_i = (h_j − h_i cos θ_ij)/sin θ_ij` and
    /// `a_i = (h_i cos θ_ki − h_k)/sin θ_ki` for its neighbours `k < i < j`
    /// in angular order.
    fn analytic_jacobian(&self, state: &State<T>) -> DenseMatrix<T> {
        let m = state.h.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|a, b| self.normals[*a].angle().partial_cmp(&self.normals[*b].angle()).expect("finite angles"));
        let root_tau = T::TAU().sqrt();
        let density = |s: T| (-s * s / T::lit(2.0)).exp() / root_tau;
        let mut jac = DenseMatrix::zeros(m);
        for (pos, &i) in order.iter().enumerate() {
            let j = order[(pos + 1) % m];
            let k = order[(pos + m - 1) % m];
            let (ui, uj, uk) = (self.normals[i], self.normals[j], self.normals[k]);
            let (hi, hj, hk) = (state.h[i], state.h[j], state.h[k]);
            let (cos_ij, sin_ij) = (ui.dot(uj), ui.perp_dot(uj));
            let (cos_ki, sin_ki) = (uk.dot(ui), uk.perp_dot(ui));
            let b = (hj - hi * cos_ij) / sin_ij;
            let a = (hi * cos_ki - hk) / sin_ki;
            let e = (-hi * hi / T::lit(2.0)).exp() / root_tau;
            let g = e * normal_interval(a, b);
            let (db, da) = (density(b), density(a));
            let dg_i = -hi * g + e * (db * (-cos_ij / sin_ij) - da * (cos_ki / sin_ki));
            let dg_j = e * db / sin_ij;
            let dg_k = e * da / sin_ki;
            let weight = hi.powf(T::one() - self.p);
            let dweight = (T::one() - self.p) * hi.powf(-self.p);
            jac.set(i, i, dweight * g + weight * dg_i);
            jac.set(i, j, jac.get(i, j) + weight * dg_j);
            jac.set(i, k, jac.get(i, k) + weight * dg_k);
        }
        jac
    }
}

fn validate_measure<T: Real>(mu: &SphereMeasure<T>) -> Result<()> {
    let dim = mu.dim();
    let dirs = mu.directions();
    for (index, a) in mu.atoms().iter().enumerate() {
        if !(a.mass > T::zero()) {
            return Err(Error::InvalidInput(format!("atom {index} has non-positive mass {}", a.mass)));
        }
    }
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            if dirs[i].max_abs_diff(dirs[j]) <= T::lit(1e-12) {
                return Err(Error::InvalidInput(format!("atoms {i} and {j} share a direction")));
            }
        }
    }
    if let Some(w) = hemisphere_witness(dim, &dirs, T::lit(1e-12)) {
        return Err(Error::Hemisphere { witness: w.to_vec(dim).iter().map(|x| x.to_f64_lossy()).collect() });
    }
    if mu.len() < dim + 1 {
        return Err(Error::InvalidInput(format!("need at least {} atoms, got {}", dim + 1, mu.len())));
    }
    Ok(())
}

/// Newton iteration on the support numbers `h_i` of `[h]` over the atom
/// directions of `mu`, solving `S_{p,γ_n}([h], u_i) = μ_i`.
///
/// Steps are halved until `‖F‖∞` decreases and the iterate keeps Gaussian
/// volume at least 0.45; if that is impossible the iteration restarts from
/// larger balls before reporting a branch violation.
pub fn solve_discrete<T: Real>(
    ctx: &GaussianContext<T>,
    mu: &SphereMeasure<T>,
    p: T,
    cfg: &SolverConfig<T>,
) -> Result<SolverReport<T>> {
    cfg.validate()?;
    if !(p >= T::one()) {
        return Err(Error::InvalidInput(format!("exponent p must be >= 1, got {p}")));
    }
    if mu.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch { left: mu.dim(), right: ctx.dim() });
    }
    validate_measure(mu)?;
    let problem = Problem { ctx, normals: mu.directions(), target: mu.masses(), p };

    let mut starts: Vec<(String, Vec<T>)> = Vec::new();
    let first_radius = match &cfg.initialization {
        Initialization::LargeBall { radius } => {
            starts.push((format!("ball of radius {radius}"), vec![*radius; mu.len()]));
            *radius
        }
        Initialization::GivenBody(body) => {
            if body.dim() != mu.dim() {
                return Err(Error::DimensionMismatch { left: body.dim(), right: mu.dim() });
            }
            starts.push(("given body".into(), problem.normals.iter().map(|u| body.support(*u)).collect()));
            T::zero()
        }
    };
    for r in RESTART_RADII.iter().map(|r| T::lit(*r)).filter(|r| *r > first_radius) {
        starts.push((format!("ball of radius {r}"), vec![r; mu.len()]));
    }

    let mut notes: Vec<String> = Vec::new();
    let mut low_volume: Option<f64> = None;
    let mut last_error = None;
    for (label, h0) in starts {
        match run(&problem, h0, cfg) {
            Ok((state, iterations, trace)) => {
                if state.gauss_volume < T::lit(VOLUME_FLOOR) {
                    return Err(Error::BranchViolation { gauss_volume: state.gauss_volume.to_f64_lossy() });
                }
                let mu_positive = problem.target.iter().enumerate().filter(|(_, m)| **m > T::zero());
                for (i, _) in mu_positive {
                    if state.body.is_redundant(i) {
                        return Err(Error::FacetVanished { index: i });
                    }
                }
                notes.push(format!("converged from {label}"));
                return Ok(SolverReport {
                    solution: state.body,
                    residual: state.residual,
                    gauss_volume: state.gauss_volume,
                    iterations,
                    branch_note: notes.join("; "),
                    trace,
                });
            }
            Err(AttemptError::LowVolume(g)) => {
                notes.push(format!("start from {label} rejected: iterate with gaussian volume {g:.6} < 0.45"));
                low_volume = Some(low_volume.map_or(g, |v: f64| v.min(g)));
            }
            Err(AttemptError::Other(e)) => {
                notes.push(format!("start from {label} failed: {e}"));
                last_error = Some(e);
            }
        }
    }
    match (low_volume, last_error) {
        (Some(g), _) => Err(Error::BranchViolation { gauss_volume: g }),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::Inconsistent("solver made no attempt".into())),
    }
}

type Run<T> = (State<T>, usize, Vec<TraceEntry<T>>);

fn run<T: Real>(problem: &Problem<'_, T>, h0: Vec<T>, cfg: &SolverConfig<T>) -> Result<Run<T>, AttemptError> {
    let volume_floor = T::lit(ITERATE_VOLUME_FLOOR);
    let mut state = problem.state(h0)?;
    let mut trace = Vec::new();
    let record = |s: &State<T>, trace: &mut Vec<TraceEntry<T>>| -> Result<()> {
        let r = max_radial(&s.body, problem.ctx.grid())?;
        trace.push(TraceEntry { residual: s.residual, gauss_volume: s.gauss_volume, max_radial: r.radius });
        Ok(())
    };
    record(&state, &mut trace)?;
    if state.gauss_volume < volume_floor {
        return Err(AttemptError::LowVolume(state.gauss_volume.to_f64_lossy()));
    }
    for iteration in 0..cfg.max_iterations {
        if state.residual <= cfg.residual_tol {
            return Ok((state, iteration, trace));
        }
        let jac = problem.jacobian(&state, cfg.jacobian)?;
        let rhs: Vec<T> = state.residual_vec.iter().map(|f| -*f).collect();
        let step = newton_step(jac, &rhs)
            .ok_or_else(|| Error::Inconsistent("Jacobian is singular even after regularisation".into()))?;

        let mut lambda = cfg.damping;
        let mut accepted = None;
        let mut low_volume = None;
        for _ in 0..MAX_HALVINGS {
            let candidate: Vec<T> = state.h.iter().zip(&step).map(|(h, d)| *h + lambda * *d).collect();
            if candidate.iter().all(|h| *h > T::zero()) {
                if let Ok(next) = problem.state(candidate) {
                    let decrease = next.residual <= (T::one() - T::lit(1e-4) * lambda) * state.residual;
                    if decrease && next.gauss_volume >= volume_floor {
                        accepted = Some(next);
                        break;
                    }
                    if decrease {
                        low_volume = Some(next.gauss_volume.to_f64_lossy());
                    }
                }
            }
            lambda = lambda / T::lit(2.0);
        }
        match accepted {
            Some(next) => {
                state = next;
                record(&state, &mut trace)?;
            }
            None => {
                if let Some(g) = low_volume {
                    return Err(AttemptError::LowVolume(g));
                }
                return Err(stall_error(problem, &state, iteration + 1).into());
            }
        }
    }
    if state.residual <= cfg.residual_tol {
        return Ok((state, cfg.max_iterations, trace));
    }
    Err(stall_error(problem, &state, cfg.max_iterations).into())
}

fn stall_error<T: Real>(problem: &Problem<'_, T>, state: &State<T>, iterations: usize) -> Error {
    let stuck = state.body.redundant_indices().into_iter().find(|i| problem.target[*i] > T::zero());
    match stuck {
        Some(index) => Error::FacetVanished { index },
        None => Error::NoConvergence { iterations, residual: state.residual.to_f64_lossy() },
    }
}

/// Solves `J d = rhs`, shifting the diagonal when `J` is singular.
fn newton_step<T: Real>(mut jac: DenseMatrix<T>, rhs: &[T]) -> Option<Vec<T>> {
    if let Some(d) = jac.solve(rhs) {
        return Some(d);
    }
    let scale = jac.max_abs().max(T::min_positive_value());
    let mut shift = scale * T::lit(1e-12);
    for _ in 0..8 {
        jac.add_to_diagonal(shift);
        if let Some(d) = jac.solve(rhs) {
            return Some(d);
        }
        shift = shift * T::lit(100.0);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::lp_surface_measure;
    use crate::sphere_grid::SphericalGrid;

    fn ctx() -> GaussianContext<f64> {
        GaussianContext::new(2).unwrap()
    }

    #[test]
    fn recovers_scaled_square() {
        let c = ctx();
        let k0 = Polytope::<f64>::cube(2, 1.4).unwrap();
        for p in [1.0, 2.0] {
            let mu = lp_surface_measure(&c, &k0, p).unwrap();
            for jacobian in [JacobianKind::FiniteDifference, JacobianKind::N2Analytic] {
                let cfg = SolverConfig { jacobian, ..SolverConfig::default() };
                let rep = solve_discrete(&c, &mu, p, &cfg).unwrap();
                for (h, h0) in rep.solution.support_numbers().iter().zip(k0.support_numbers()) {
                    assert!((h - h0).abs() < 1e-8, "p={p} {h} vs {h0}");
                }
                assert!(rep.residual <= 1e-9);
                assert!(rep.gauss_volume >= 0.5);
            }
        }
    }

    #[test]
    fn analytic_jacobian_matches_differences() {
        let c = ctx();
        let normals: Vec<_> = (0..7).map(|k| Vec3::from_angle(0.3 + k as f64 * 0.9)).collect();
        let h = vec![1.1, 1.3, 0.9, 1.5, 1.2, 1.0, 1.4];
        let problem = Problem { ctx: &c, normals, target: vec![0.0; 7], p: 1.7 };
        let state = problem.state(h).unwrap();
        assert!(state.body.redundant_indices().is_empty());
        let a = problem.analytic_jacobian(&state);
        let f = problem.fd_jacobian(&state).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert!((a.get(i, j) - f.get(i, j)).abs() < 1e-5, "({i},{j}) {} {}", a.get(i, j), f.get(i, j));
            }
        }
    }

    #[test]
    fn hemisphere_measure_is_rejected() {
        let c = ctx();
        let atoms = (0..4)
            .map(|k| crate::gaussian::Atom { direction: Vec3::from_angle(k as f64 * 0.5), mass: 0.1 })
            .collect();
        let mu = SphereMeasure::discrete(2, atoms).unwrap();
        assert!(matches!(solve_discrete(&c, &mu, 1.0, &SolverConfig::default()), Err(Error::Hemisphere { .. })));
    }

    #[test]
    fn uniform_measure_gives_large_ball() {
        let grid = SphericalGrid::<f64>::new(2, 360).unwrap();
        let c = GaussianContext::with_grid(grid.clone()).unwrap();
        let mu = SphereMeasure::from_density(&grid, |_| 0.5 / std::f64::consts::TAU).unwrap();
        let rep = solve_discrete(&c, &mu, 1.0, &SolverConfig::default()).unwrap();
        let r = rep.solution.support_numbers()[0];
        assert!((r - 1.467410087232).abs() < 1e-4, "{r}");
    }
}
