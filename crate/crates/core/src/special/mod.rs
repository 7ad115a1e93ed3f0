//! Gaussian tail integrals, the scaled Mills ratio, adaptive quadrature and
//! the reference densities and CDFs used by the statistical checks.

pub mod density;
pub mod erf;
pub mod laws;
pub mod quad;

pub use density::{cdf_from_density, density_table_csv, CdfSpec, DensitySpec};
pub use erf::{gauss_tail, mills_h, normal_cdf, normal_sf};
pub use laws::*;
