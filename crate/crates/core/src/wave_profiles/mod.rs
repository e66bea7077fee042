//! Evaluable wave patterns: the self-similar diffusion profile, the viscous
//! contact wave, Burgers-smoothed rarefaction waves, and the composite ansatz.
//!
//! Every pattern implements [`Profile`], which returns values together with
//! their first space and time derivatives. The time derivatives let the
//! solver pin Dirichlet boundaries to a moving profile exactly.

mod burgers;
mod composite;
mod contact;
mod rarefaction;
mod self_similar;

pub use burgers::BurgersWave;
pub use composite::{CompositeProfile, CompositeSample};
pub use contact::ContactWave;
pub use rarefaction::SmoothRarefaction;
pub use self_similar::{SelfSimilarProfile, DEFAULT_HALF_WIDTH, DEFAULT_NODES};

use serde::Serialize;

use crate::euler_riemann::EndState;

/// Values of `(V, U, Theta)` at one point together with their first
/// derivatives in `x` and `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ProfileSample {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub v_x: f64,
    pub u_x: f64,
    pub theta_x: f64,
    pub v_t: f64,
    pub u_t: f64,
    pub theta_t: f64,
}

impl ProfileSample {
    pub fn constant(state: &EndState) -> Self {
        Self {
            v: state.v,
            u: state.u,
            theta: state.theta,
            ..Self::default()
        }
    }

    /// Pressure `R Theta / V`.
    pub fn pressure(&self, r: f64) -> f64 {
        r * self.theta / self.v
    }

    /// `d/dx (R Theta / V)`.
    pub fn pressure_x(&self, r: f64) -> f64 {
        r * (self.theta_x * self.v - self.theta * self.v_x) / (self.v * self.v)
    }
}

/// A smooth reference solution `(V, U, Theta)(x, t)`.
pub trait Profile: Send + Sync {
    fn sample(&self, x: f64, t: f64) -> ProfileSample;

    /// States approached as `x -> -inf` and `x -> +inf`.
    fn far_field(&self) -> (EndState, EndState);
}

/// A spatially uniform, steady state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantProfile(pub EndState);

impl Profile for ConstantProfile {
    fn sample(&self, _x: f64, _t: f64) -> ProfileSample {
        ProfileSample::constant(&self.0)
    }

    fn far_field(&self) -> (EndState, EndState) {
        (self.0, self.0)
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        (**self).sample(x, t)
    }

    fn far_field(&self) -> (EndState, EndState) {
        (**self).far_field()
    }
}

impl<P: Profile + ?Sized> Profile for Box<P> {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        (**self).sample(x, t)
    }

    fn far_field(&self) -> (EndState, EndState) {
        (**self).far_field()
    }
}

/// Second-order centred difference of `f` at `x` with spacing `h`.
pub(crate) fn centered_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
