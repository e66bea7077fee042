//! Thermodynamics and wave curves of the polytropic Euler system in
//! Lagrangian coordinates, and the solve for the intermediate states of a
//! rarefaction-contact-rarefaction Riemann pattern.

mod curves;
mod decomposition;
mod gas;

pub use curves::{rarefaction_velocity, Isentrope};
pub use decomposition::{
    check_pattern_membership, solve_wave_decomposition, PatternMembership, WaveDecomposition,
    DEFAULT_TOL, MAX_ITERATIONS,
};
pub use gas::{EndState, Family, GasModel};
