//! Exact samplers, closed-form densities and path-level Monte Carlo checks
//! for Brownian motion, the Brownian bridge, the Brownian meander and the
//! three-dimensional Bessel process under uniform sampling.
//!
//! The crate is split into five layers:
//!
//! * [`sampling`]: seeded, stream-splittable exact samplers for the
//!   closed-form laws (joint law of `(B_1, L_1)`, `T_1`, `b(U)`, `m(U)`,
//!   `R_1`, `R_U`, ...).
//! * [`special`]: Gaussian tail integrals, the scaled Mills ratio `H`,
//!   adaptive quadrature and the reference densities/CDFs.
//! * [`path`]: discretized path simulation, local-time estimation, hitting
//!   paths, the pseudo-bridge and the Jeulin residual.
//! * [`stats`]: KS, chi-square, rank-correlation and mean checks producing
//!   [`stats::TestReport`]s.
//! * [`experiments`]: the named experiment registry and suite runner used by
//!   the `blab` binary.

pub mod error;
pub(crate) mod fsio;
pub mod experiments;
pub mod path;
pub mod sampling;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
