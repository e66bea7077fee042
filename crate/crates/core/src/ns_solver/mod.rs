//! Method-of-lines integration of the viscous, heat-conducting gas equations
//! in Lagrangian coordinates,
//!
//! ```text
//! v_t = u_x
//! u_t = -p_x + mu (u_x / v)_x
//! c_v theta_t = -p u_x + kappa (theta_x / v)_x + mu u_x^2 / v
//! ```
//!
//! on a truncated uniform grid with both end nodes pinned to a reference
//! profile. Space is discretised with second-order centred differences, time
//! with the classical four-stage Runge-Kutta method.

mod grid;
mod run;
mod scheme;
mod state;

pub use grid::Grid;
pub use run::{run, write_fields_csv, RunFailure, RunOutcome, RunSettings, SnapshotSink, VecSink};
pub use scheme::{rhs, stable_dt, step, Derivatives, Forcing, Stepper};
pub use state::{init_state, FlowState, InitialData, PerturbationShape, PerturbationSpec};
