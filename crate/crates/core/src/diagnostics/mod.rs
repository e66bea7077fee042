//! Functionals of the perturbation `(phi, psi, zeta) = (v - V, u - U, theta - Theta)`
//! between a computed state and its reference profile.
//!
//! Integrals use the composite trapezoid rule on the solver grid and spatial
//! derivatives use centred differences with second-order one-sided stencils
//! at the two end nodes.

mod energy;
mod functional;
mod norms;
mod report;

pub use energy::{
    basic_energy, cell_average_check, dissipation, perturbation_fields, rarefaction_dissipation,
    sample_profile, weighted_l2, CellCheck, PerturbationFields,
};
pub use functional::{phi_func, phi_roots};
pub use norms::{derivative, norms, trapezoid, ComponentNorms};
pub use report::{
    snapshot, PerturbationReport, ReportTracker, TimeseriesWriter, TIMESERIES_VERSION,
};
