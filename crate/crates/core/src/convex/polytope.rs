use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::{hemisphere_witness, SphericalGrid};

use super::ConvexBody;

/// Absolute tolerance for incidence and redundancy predicates on O(1) data.
pub const GEOMETRY_TOL: f64 = 1e-10;
/// Tolerance on `|u| − 1` accepted for input normals.
pub const UNIT_TOL: f64 = 1e-9;

/// Boundary piece of a polytope lying in `{x : x·u_i = h_i}`.
///
/// Planar facets hold their two endpoints in counter-clockwise order; spatial
/// facets hold a counter-clockwise (seen from outside) vertex loop. Redundant
/// constraints keep an empty vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet<T> {
    pub vertices: Vec<Vec3<T>>,
    pub redundant: bool,
}

/// Convex polytope `{x : x·u_i ≤ h_i}` with the origin in its interior.
///
/// Constraints that do not touch the boundary in a set of positive
/// (n−1)-measure are kept and flagged as redundant so that per-facet data
/// stays index-aligned with the input normals.
#[derive(Debug, Clone)]
pub struct Polytope<T> {
    dim: usize,
    normals: Vec<Vec3<T>>,
    support_numbers: Vec<T>,
    facets: Vec<Facet<T>>,
    vertices: Vec<Vec3<T>>,
}

impl<T: Real> Polytope<T> {
    /// Wulff shape `[f] = ∩_i {x : x·u_i ≤ f_i}`.
    pub fn wulff(dim: usize, normals: Vec<Vec3<T>>, f_values: Vec<T>) -> Result<Self> {
        validate_constraints(dim, &normals, &f_values)?;
        let (facets, vertices) = match dim {
            2 => build_planar(&normals, &f_values)?,
            3 => build_spatial(&normals, &f_values)?,
            d => return Err(Error::UnsupportedDimension(d)),
        };
        Ok(Self { dim, normals, support_numbers: f_values, facets, vertices })
    }

    /// Axis-aligned cube `[-a, a]^n`.
    pub fn cube(dim: usize, half_width: T) -> Result<Self> {
        let mut normals = Vec::new();
        for axis in 0..dim {
            for sign in [T::one(), -T::one()] {
                let mut c = [T::zero(); 3];
                c[axis] = sign;
                normals.push(Vec3::new(c[0], c[1], c[2]));
            }
        }
        let n = normals.len();
        Self::wulff(dim, normals, vec![half_width; n])
    }

    /// Regular polygon with `sides` facets at distance `inradius`, first
    /// normal along e₁.
    pub fn regular_polygon(sides: usize, inradius: T) -> Result<Self> {
        let step = T::TAU() / T::from_usize_lossy(sides);
        let normals = (0..sides).map(|k| Vec3::from_angle(step * T::from_usize_lossy(k))).collect();
        Self::wulff(2, normals, vec![inradius; sides])
    }

    /// `[r]` over the grid nodes: a circumscribed approximation of `r·B_n`.
    pub fn ball_approximation(grid: &SphericalGrid<T>, radius: T) -> Result<Self> {
        Self::wulff(grid.dim(), grid.nodes().to_vec(), vec![radius; grid.len()])
    }

    /// Wulff shape of this polytope's own data; used to rebuild after edits.
    pub fn with_support_numbers(&self, support_numbers: Vec<T>) -> Result<Self> {
        Self::wulff(self.dim, self.normals.clone(), support_numbers)
    }

    /// `s·K` for `s > 0`.
    pub fn scaled(&self, s: T) -> Result<Self> {
        self.with_support_numbers(self.support_numbers.iter().map(|h| *h * s).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec3<T>] {
        &self.normals
    }

    pub fn support_numbers(&self) -> &[T] {
        &self.support_numbers
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn is_redundant(&self, i: usize) -> bool {
        self.facets[i].redundant
    }

    pub fn redundant_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|i| self.facets[*i].redundant).collect()
    }

    /// Actual support values `h_K(u_i)`; these are below `h_i` exactly at
    /// redundant constraints.
    pub fn actual_support_numbers(&self) -> Vec<T> {
        self.normals.iter().map(|u| self.support(*u)).collect()
    }

    pub fn contains(&self, x: Vec3<T>, tol: T) -> bool {
        self.normals.iter().zip(&self.support_numbers).all(|(u, h)| x.dot(*u) <= *h + tol)
    }

    /// (n−1)-dimensional measure of facet `i`.
    pub fn facet_area(&self, i: usize) -> T {
        let f = &self.facets[i];
        if f.redundant {
            return T::zero();
        }
        match self.dim {
            2 => (f.vertices[1] - f.vertices[0]).norm(),
            _ => {
                let v0 = f.vertices[0];
                let mut acc = Vec3::zero();
                for w in f.vertices[1..].windows(2) {
                    acc = acc + (w[0] - v0).cross(w[1] - v0);
                }
                acc.dot(self.normals[i]) / T::lit(2.0)
            }
        }
    }

    /// Lebesgue volume via the cone decomposition `Σ h_i |F_i| / n`.
    pub fn lebesgue_volume(&self) -> T {
        let n = T::from_usize_lossy(self.dim);
        (0..self.len()).map(|i| self.support_numbers[i] * self.facet_area(i)).sum::<T>() / n
    }
}

impl<T: Real> ConvexBody<T> for Polytope<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: Vec3<T>) -> T {
        self.vertices.iter().map(|v| v.dot(u)).fold(T::neg_infinity(), T::max)
    }

    fn radial(&self, u: Vec3<T>) -> T {
        // redundant constraints are valid constraints, so the minimum over
        // all of them is still the radial function
        let mut best = T::infinity();
        for (n, h) in self.normals.iter().zip(&self.support_numbers) {
            let c = u.dot(*n);
            if c > T::zero() {
                best = best.min(*h / c);
            }
        }
        best
    }

    fn normal_directions(&self) -> Vec<Vec3<T>> {
        self.normals.clone()
    }

    fn extreme_directions(&self) -> Vec<Vec3<T>> {
        self.vertices.iter().filter_map(|v| v.normalized()).collect()
    }
}

fn validate_constraints<T: Real>(dim: usize, normals: &[Vec3<T>], f_values: &[T]) -> Result<()> {
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if normals.len() != f_values.len() {
        return Err(Error::InvalidInput(format!(
            "{} normals but {} support values",
            normals.len(),
            f_values.len()
        )));
    }
    for (index, u) in normals.iter().enumerate() {
        if !u.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if dim == 2 && u.z != T::zero() {
            return Err(Error::InvalidInput(format!("normal {index} has a z component in the plane")));
        }
        let norm = u.norm();
        if (norm - T::one()).abs() > T::lit(UNIT_TOL) {
            return Err(Error::NotUnit { index, norm: norm.to_f64_lossy() });
        }
    }
    for (index, h) in f_values.iter().enumerate() {
        if !h.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if *h <= T::zero() {
            return Err(Error::NonPositiveSupport { index, value: h.to_f64_lossy() });
        }
    }
    if let Some(w) = hemisphere_witness(dim, normals, T::lit(GEOMETRY_TOL)) {
        return Err(Error::Hemisphere { witness: w.to_vec(dim).iter().map(|x| x.to_f64_lossy()).collect() });
    }
    Ok(())
}

// Marks constraints whose normal duplicates an earlier, at least as tight one.
fn duplicate_mask<T: Real>(normals: &[Vec3<T>], f_values: &[T]) -> Vec<bool> {
    let eps = T::lit(1e-12);
    let m = normals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|a, b| {
        let (ua, ub) = (normals[*a], normals[*b]);
        ua.x.partial_cmp(&ub.x)
            .unwrap_or(Ordering::Equal)
            .then(ua.y.partial_cmp(&ub.y).unwrap_or(Ordering::Equal))
            .then(ua.z.partial_cmp(&ub.z).unwrap_or(Ordering::Equal))
    });
    let mut dup = vec![false; m];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if normals[j].x - normals[i].x > eps {
                break;
            }
            if dup[j] || normals[i].max_abs_diff(normals[j]) > eps {
                continue;
            }
            // keep the tighter constraint, ties resolved to the lower index
            let keep_i = f_values[i] < f_values[j] || (f_values[i] == f_values[j] && i < j);
            if keep_i {
                dup[j] = true;
            } else {
                dup[i] = true;
            }
        }
    }
    dup
}

type Built<T> = (Vec<Facet<T>>, Vec<Vec3<T>>);

fn build_planar<T: Real>(normals: &[Vec3<T>], f_values: &[T]) -> Result<Built<T>> {
    let m = normals.len();
    let dup = duplicate_mask(normals, f_values);
    let mut order: Vec<usize> = (0..m).filter(|i| !dup[*i]).collect();
    order.sort_by(|a, b| normals[*a].angle().partial_cmp(&normals[*b].angle()).expect("finite normals"));

    // Graham scan on the dual points u_i/f_i around the origin, which lies
    // inside their hull; extreme dual points are exactly the facets.
    let dual: Vec<Vec3<T>> = (0..m).map(|i| normals[i] / f_values[i]).collect();
    let start = order
        .iter()
        .enumerate()
        .max_by(|a, b| dual[*a.1].norm_sq().partial_cmp(&dual[*b.1].norm_sq()).expect("finite"))
        .map(|(pos, _)| pos)
        .expect("nonempty constraint set");
    order.rotate_left(start);
    let tol = T::lit(1e-13);
    let left_turn = |a: usize, b: usize, c: usize| {
        let ab = dual[b] - dual[a];
        let bc = dual[c] - dual[b];
        ab.perp_dot(bc) > tol * ab.norm() * bc.norm()
    };
    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for &c in &order {
        while hull.len() >= 2 && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], c) {
            hull.pop();
        }
        hull.push(c);
    }
    while hull.len() >= 3 && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], hull[0]) {
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::EmptyInterior);
    }

    let k = hull.len();
    let mut corner = Vec::with_capacity(k);
    for pos in 0..k {
        let (a, b) = (hull[pos], hull[(pos + 1) % k]);
        corner.push(intersect_lines(normals[a], f_values[a], normals[b], f_values[b])?);
    }
    let mut facets = vec![Facet { vertices: Vec::new(), redundant: true }; m];
    for pos in 0..k {
        let start = corner[(pos + k - 1) % k];
        let end = corner[pos];
        facets[hull[pos]] = Facet { vertices: vec![start, end], redundant: false };
    }
    Ok((facets, corner))
}

fn intersect_lines<T: Real>(ua: Vec3<T>, fa: T, ub: Vec3<T>, fb: T) -> Result<Vec3<T>> {
    let det = ua.perp_dot(ub);
    if det.abs() <= T::epsilon() {
        return Err(Error::EmptyInterior);
    }
    Ok(Vec3::planar((fa * ub.y - fb * ua.y) / det, (ua.x * fb - ub.x * fa) / det))
}

fn build_spatial<T: Real>(normals: &[Vec3<T>], f_values: &[T]) -> Result<Built<T>> {
    let m = normals.len();
    let dup = duplicate_mask(normals, f_values);
    let live: Vec<usize> = (0..m).filter(|i| !dup[*i]).collect();
    let scale = f_values.iter().fold(T::one(), |a, b| a.max(*b));
    let tol = T::lit(GEOMETRY_TOL) * scale;
    let det_tol = T::lit(1e-12);

    // Every vertex is the intersection of three constraint planes that
    // satisfies all remaining constraints.
    let mut vertices: Vec<Vec3<T>> = Vec::new();
    for (a_pos, &a) in live.iter().enumerate() {
        for (b_pos, &b) in live.iter().enumerate().skip(a_pos + 1) {
            let ab = normals[a].cross(normals[b]);
            if ab.norm() <= det_tol {
                continue;
            }
            for &c in &live[b_pos + 1..] {
                let det = ab.dot(normals[c]);
                if det.abs() <= det_tol {
                    continue;
                }
                let x = (normals[b].cross(normals[c]) * f_values[a]
                    + normals[c].cross(normals[a]) * f_values[b]
                    + ab * f_values[c])
                    / det;
                if !live.iter().all(|&l| x.dot(normals[l]) <= f_values[l] + tol) {
                    continue;
                }
                if !vertices.iter().any(|v| v.max_abs_diff(x) <= tol * T::lit(10.0)) {
                    vertices.push(x);
                }
            }
        }
    }
    if vertices.len() < 4 {
        return Err(Error::EmptyInterior);
    }

    let mut facets = Vec::with_capacity(m);
    for i in 0..m {
        if dup[i] {
            facets.push(Facet { vertices: Vec::new(), redundant: true });
            continue;
        }
        let u = normals[i];
        let on: Vec<Vec3<T>> = vertices.iter().copied().filter(|v| (v.dot(u) - f_values[i]).abs() <= tol).collect();
        if on.len() < 3 {
            facets.push(Facet { vertices: Vec::new(), redundant: true });
            continue;
        }
        let centroid = on.iter().fold(Vec3::zero(), |acc, v| acc + *v) / T::from_usize_lossy(on.len());
        let helper = if u.x.abs() < T::lit(0.9) { Vec3::new(T::one(), T::zero(), T::zero()) } else { Vec3::new(T::zero(), T::one(), T::zero()) };
        let e1 = u.cross(helper).normalized().expect("helper not parallel");
        let e2 = u.cross(e1);
        let mut ordered: Vec<(T, Vec3<T>)> =
            on.into_iter().map(|v| ((v - centroid).dot(e2).atan2((v - centroid).dot(e1)), v)).collect();
        ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angle"));
        let loop_vertices: Vec<Vec3<T>> = ordered.into_iter().map(|(_, v)| v).collect();
        let mut facet = Facet { vertices: loop_vertices, redundant: false };
        // a facet touching the body only along an edge has no area
        let v0 = facet.vertices[0];
        let mut twice_area = Vec3::zero();
        for w in facet.vertices[1..].windows(2) {
            twice_area = twice_area + (w[0] - v0).cross(w[1] - v0);
        }
        if twice_area.dot(u) <= tol * tol {
            facet = Facet { vertices: Vec::new(), redundant: true };
        }
        facets.push(facet);
    }
    Ok((facets, vertices))
}
