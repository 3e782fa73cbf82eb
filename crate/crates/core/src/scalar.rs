//! Scalar abstraction and the small fixed-size vector used throughout.
//!
//! Everything numeric in the crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Special functions (`erf`, `erfc`) are
//! delegated to `libm` at the native precision of the type.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + AddAssign + SubAssign + Send + Sync + 'static
{
    fn erf(self) -> Self;
    fn erfc(self) -> Self;

    /// Converts an `f64` constant. Panics only for values the type cannot hold,
    /// which never happens for the literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn erf(self) -> Self {
        libm::erf(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erf(self) -> Self {
        libm::erff(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Standard normal distribution function Φ.
pub fn normal_cdf<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    half * (-x * T::FRAC_1_SQRT_2()).erfc()
}

/// Φ(b) − Φ(a) for a ≤ b, evaluated without cancellation in either tail.
pub fn normal_interval<T: Real>(a: T, b: T) -> T {
    let half = T::lit(0.5);
    let s = T::FRAC_1_SQRT_2();
    if a >= T::zero() {
        half * ((a * s).erfc() - (b * s).erfc())
    } else if b <= T::zero() {
        half * ((-b * s).erfc() - (-a * s).erfc())
    } else {
        half * ((b * s).erf() - (a * s).erf())
    }
}

/// Point or direction in R^2 or R^3. Planar data keeps `z == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn planar(x: T, y: T) -> Self {
        Self { x, y, z: T::zero() }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Unit vector at polar angle `theta` in the plane.
    #[inline]
    pub fn from_angle(theta: T) -> Self {
        Self::planar(theta.cos(), theta.sin())
    }

    /// Builds a vector from the first `dim` coordinates of a slice.
    pub fn from_slice(coords: &[T]) -> Option<Self> {
        match coords {
            [x, y] => Some(Self::planar(*x, *y)),
            [x, y, z] => Some(Self::new(*x, *y, *z)),
            _ => None,
        }
    }

    pub fn to_vec(self, dim: usize) -> Vec<T> {
        let all = [self.x, self.y, self.z];
        all[..dim].to_vec()
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn perp_dot(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    /// Counter-clockwise rotation by a quarter turn (planar).
    #[inline]
    pub fn perp(self) -> Self {
        Self::planar(-self.y, self.x)
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, o: Self) -> T {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.to_f64_lossy()),
            U::lit(self.y.to_f64_lossy()),
            U::lit(self.z.to_f64_lossy()),
        )
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_interval_matches_cdf_difference() {
        for &(a, b) in &[(-1.0, 1.0), (0.5, 3.0), (-4.0, -0.25), (-0.1, 0.0)] {
            let direct = normal_cdf(b) - normal_cdf(a);
            assert!((normal_interval(a, b) - direct).abs() < 1e-15);
        }
        // far tail: the cdf difference would cancel to zero
        let tail: f64 = normal_interval(9.0, 10.0);
        assert!(tail > 0.0 && tail < 1e-18);
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert!((normal_cdf(0.0f64) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.0f64) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((normal_cdf(1.0f32) - 0.841_344_7).abs() < 1e-6);
    }

    #[test]
    fn cross_and_perp() {
        let e1 = Vec3::<f64>::new(1.0, 0.0, 0.0);
        let e2 = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(e2), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(e1.perp(), e2);
        assert_eq!(e1.perp_dot(e2), 1.0);
    }
}
