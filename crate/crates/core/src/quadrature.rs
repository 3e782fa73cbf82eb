//! Gauss–Legendre rules on intervals and a collapsed-square rule on triangles.

use crate::scalar::{Real, Vec3};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes are the roots of P_n, found by Newton iteration on the
    /// three-term recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let nf = T::from_usize_lossy(n);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let one = T::one();
        let two = T::lit(2.0);
        for i in 0..n.div_ceil(2) {
            let guess = T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5));
            let mut x = guess.cos();
            let mut dp = one;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = two / ((one - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::lit(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + rad * *x);
        }
        acc * rad
    }

    /// Composite rule: `[a, b]` split into `pieces` equal panels.
    pub fn integrate_composite<F: FnMut(T) -> T>(&self, a: T, b: T, pieces: usize, mut f: F) -> T {
        let pieces = pieces.max(1);
        let step = (b - a) / T::from_usize_lossy(pieces);
        let mut acc = T::zero();
        for k in 0..pieces {
            let lo = a + step * T::from_usize_lossy(k);
            acc += self.integrate(lo, lo + step, &mut f);
        }
        acc
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - one) * x * p1 - (kf - one) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - one);
    (p1, d)
}

/// Tensor Gauss–Legendre rule on the unit square collapsed onto a triangle.
///
/// A point `(s, t)` maps to `a + s (b − a) + s t (c − b)`; the stored weights
/// already include the collapse Jacobian `s` and sum to 1/2.
#[derive(Debug, Clone)]
pub struct TriangleRule<T> {
    points: Vec<(T, T, T)>,
}

impl<T: Real> TriangleRule<T> {
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::<T>::new(order);
        let half = T::lit(0.5);
        let mut points = Vec::with_capacity(order * order);
        for (xs, ws) in gl.nodes.iter().zip(&gl.weights) {
            let s = (*xs + T::one()) * half;
            for (xt, wt) in gl.nodes.iter().zip(&gl.weights) {
                let t = (*xt + T::one()) * half;
                points.push((s, t, *ws * *wt * half * half * s));
            }
        }
        Self { points }
    }

    /// Integrates `f` over the triangle `(a, b, c)`.
    pub fn integrate<F: FnMut(Vec3<T>) -> T>(&self, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, mut f: F) -> T {
        let ab = b - a;
        let bc = c - b;
        let double_area = ab.cross(c - a).norm();
        let mut acc = T::zero();
        for &(s, t, w) in &self.points {
            acc += w * f(a + ab * s + bc * (s * t));
        }
        acc * double_area
    }
}
