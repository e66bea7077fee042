//! Numerical laboratory for viscous contact waves and smooth rarefaction
//! waves of the one-dimensional compressible Navier-Stokes system in
//! Lagrangian coordinates.
//!
//! The crate is organised bottom-up:
//!
//! - [`euler_riemann`]: polytropic-gas thermodynamics, characteristic speeds,
//!   rarefaction curves and the rarefaction-contact-rarefaction solve.
//! - [`wave_profiles`]: the self-similar diffusion profile, the viscous
//!   contact wave, Burgers-smoothed rarefactions and the composite ansatz,
//!   together with their residuals and source terms.
//! - [`ns_solver`]: a method-of-lines finite-difference integrator for the
//!   full viscous, heat-conducting system.
//! - [`diagnostics`]: perturbation norms, the basic energy and dissipation
//!   functionals, heat-kernel weighted norms and cell-average bounds.
//! - [`checks`]: property evaluations (decay slopes, fitted constants) shared
//!   by the CLI and the acceptance suite.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod diagnostics;
mod error;
pub mod euler_riemann;
pub mod fit;
pub mod ns_solver;
pub mod wave_profiles;

pub use error::{Error, Result};
