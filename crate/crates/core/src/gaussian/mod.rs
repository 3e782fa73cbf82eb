//! Gaussian volume, Gaussian and L_p Gaussian surface area measures, and the
//! functionals built on them.

mod body;
mod context;
mod functionals;
mod measure;
mod monge_ampere;

pub use body::{
    apply_lp_weight, facet_gauss_mass, gauss_surface_measure, gaussian_volume, gaussian_volume_on_grid,
    lp_surface_measure, GaussianBody, MIN_SUPPORT_FOR_LP,
};
pub use context::{GaussianContext, DEFAULT_FACET_ORDER, DEFAULT_R_MAX};
pub use functionals::{
    cosine_integral, cosine_lower_bound, minkowski_gap, phi_functional, variational_check, VariationalEstimate,
    VariationalReport,
};
pub use measure::{Atom, Representation, SphereMeasure};
pub use monge_ampere::{ma_density, ma_sector_mass, ma_sector_masses};
