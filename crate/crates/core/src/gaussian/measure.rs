use crate::convex::UNIT_TOL;
use crate::error::{Error, Result};
use crate::scalar::{Real, Vec3};
use crate::sphere_grid::SphericalGrid;

/// How the atoms of a [`SphereMeasure`] arose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// One atom per polytope facet (or per given data point).
    Discrete,
    /// `mass_k = density(u_k) · w_k` on a grid of the given resolution.
    GridDensity { resolution: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub direction: Vec3<T>,
    pub mass: T,
}

/// Finite nonnegative Borel measure on S^{n-1} stored as weighted atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMeasure<T> {
    dim: usize,
    atoms: Vec<Atom<T>>,
    representation: Representation,
}

impl<T: Real> SphereMeasure<T> {
    /// Validates unit directions and finite nonnegative masses.
    pub fn new(dim: usize, atoms: Vec<Atom<T>>, representation: Representation) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (index, a) in atoms.iter().enumerate() {
            if !a.direction.is_finite() || !a.mass.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if dim == 2 && a.direction.z != T::zero() {
                return Err(Error::InvalidInput(format!("atom {index} has a z component in the plane")));
            }
            let norm = a.direction.norm();
            if (norm - T::one()).abs() > T::lit(UNIT_TOL) {
                return Err(Error::NotUnit { index, norm: norm.to_f64_lossy() });
            }
            if a.mass < T::zero() {
                return Err(Error::InvalidInput(format!("atom {index} has negative mass {}", a.mass)));
            }
        }
        Ok(Self { dim, atoms, representation })
    }

    pub fn discrete(dim: usize, atoms: Vec<Atom<T>>) -> Result<Self> {
        Self::new(dim, atoms, Representation::Discrete)
    }

    /// Grid-density measure with `mass_k = density(u_k) · w_k`.
    pub fn from_density<F: FnMut(Vec3<T>) -> T>(grid: &SphericalGrid<T>, mut density: F) -> Result<Self> {
        let atoms = grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(u, w)| Atom { direction: *u, mass: density(*u) * *w })
            .collect();
        Self::new(grid.dim(), atoms, Representation::GridDensity { resolution: grid.resolution() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn directions(&self) -> Vec<Vec3<T>> {
        self.atoms.iter().map(|a| a.direction).collect()
    }

    pub fn masses(&self) -> Vec<T> {
        self.atoms.iter().map(|a| a.mass).collect()
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `∫ f dμ`.
    pub fn integrate<F: FnMut(Vec3<T>) -> T>(&self, mut f: F) -> T {
        self.atoms.iter().map(|a| a.mass * f(a.direction)).sum()
    }

    /// Same directions, masses replaced.
    pub fn with_masses(&self, masses: Vec<T>) -> Result<Self> {
        if masses.len() != self.atoms.len() {
            return Err(Error::InvalidInput(format!("{} masses for {} atoms", masses.len(), self.atoms.len())));
        }
        let atoms = self.atoms.iter().zip(masses).map(|(a, m)| Atom { direction: a.direction, mass: m }).collect();
        Self::new(self.dim, atoms, self.representation)
    }

    /// Every mass multiplied by `s`.
    pub fn scaled(&self, s: T) -> Result<Self> {
        self.with_masses(self.atoms.iter().map(|a| a.mass * s).collect())
    }

    /// `min_k Σ_j (u_k·v_j)_+ m_j` over the grid nodes; positive exactly when
    /// the measure is not concentrated on a closed hemisphere (up to grid
    /// resolution).
    pub fn hemisphere_margin(&self, grid: &SphericalGrid<T>) -> T {
        grid.nodes()
            .iter()
            .map(|u| self.integrate(|v| u.dot(v).max(T::zero())))
            .fold(T::infinity(), T::min)
    }

    /// `max_j |m_j − n_j|` for measures with aligned atoms.
    pub fn max_mass_deviation(&self, other: &Self) -> Result<T> {
        self.check_aligned(other)?;
        Ok(self.atoms.iter().zip(&other.atoms).map(|(a, b)| (a.mass - b.mass).abs()).fold(T::zero(), T::max))
    }

    /// `Σ_j |m_j − n_j|` for measures with aligned atoms.
    pub fn total_variation(&self, other: &Self) -> Result<T> {
        self.check_aligned(other)?;
        Ok(self.atoms.iter().zip(&other.atoms).map(|(a, b)| (a.mass - b.mass).abs()).sum())
    }

    fn check_aligned(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        if self.atoms.len() != other.atoms.len() {
            return Err(Error::InvalidInput(format!("{} vs {} atoms", self.atoms.len(), other.atoms.len())));
        }
        let tol = T::lit(1e-9);
        if let Some(index) =
            self.atoms.iter().zip(&other.atoms).position(|(a, b)| a.direction.max_abs_diff(b.direction) > tol)
        {
            return Err(Error::InvalidInput(format!("atom {index} directions differ")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_mass_and_non_unit_direction() {
        let bad_mass = vec![Atom { direction: Vec3::planar(1.0, 0.0), mass: -1.0 }];
        assert!(SphereMeasure::discrete(2, bad_mass).is_err());
        let bad_dir = vec![Atom { direction: Vec3::planar(2.0, 0.0), mass: 1.0 }];
        assert!(matches!(SphereMeasure::discrete(2, bad_dir), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn single_atom_is_hemisphere_concentrated() {
        let m = SphereMeasure::discrete(2, vec![Atom { direction: Vec3::planar(1.0, 0.0), mass: 1.0 }]).unwrap();
        let grid = SphericalGrid::new(2, 64).unwrap();
        assert_eq!(m.hemisphere_margin(&grid), 0.0);
        assert_eq!(m.total_mass(), 1.0);
    }

    #[test]
    fn density_measure_integrates_like_grid() {
        let grid = SphericalGrid::<f64>::new(2, 100).unwrap();
        let m = SphereMeasure::from_density(&grid, |_| 0.5).unwrap();
        assert!((m.total_mass() - std::f64::consts::PI).abs() < 1e-13);
        assert_eq!(m.representation(), Representation::GridDensity { resolution: 100 });
    }
}
