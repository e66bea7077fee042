use super::gas::{EndState, Family, GasModel};
use crate::{Error, Result};

/// Velocity on the `family` rarefaction curve through `anchor`, at volume `v`:
/// `u = anchor.u - int_{anchor.v}^{v} lambda(eta, s_anchor) d eta`.
///
/// The integrand is a power law, so the integral is evaluated in closed form.
pub fn rarefaction_velocity(
    gas: &GasModel,
    family: Family,
    anchor: &EndState,
    v: f64,
) -> Result<f64> {
    anchor.validate()?;
    Isentrope::through(gas, family, anchor).velocity_at_volume(v)
}

/// The integral curve of one genuinely nonlinear family through an anchor
/// state. Entropy is constant along it, and it can be parametrised by volume
/// or by pressure.
#[derive(Clone, Copy, Debug)]
pub struct Isentrope {
    pub family: Family,
    pub anchor: EndState,
    pub entropy: f64,
    gamma: f64,
    r: f64,
    /// `p = coefficient * v^-gamma`
    coefficient: f64,
}

impl Isentrope {
    pub fn through(gas: &GasModel, family: Family, anchor: &EndState) -> Self {
        let entropy = anchor.entropy(gas);
        Self {
            family,
            anchor: *anchor,
            entropy,
            gamma: gas.gamma(),
            r: gas.r(),
            coefficient: gas.isentrope_coefficient(entropy),
        }
    }

    /// Eulerian sound speed `c = sqrt(gamma p v) = |lambda| v`.
    pub fn sound_speed(&self, v: f64) -> f64 {
        (self.gamma * self.coefficient).sqrt() * v.powf(0.5 * (1.0 - self.gamma))
    }

    pub fn volume_at_pressure(&self, p: f64) -> f64 {
        (self.coefficient / p).powf(1.0 / self.gamma)
    }

    pub fn pressure_at_volume(&self, v: f64) -> f64 {
        self.coefficient * v.powf(-self.gamma)
    }

    pub fn temperature_at_volume(&self, v: f64) -> f64 {
        self.pressure_at_volume(v) * v / self.r
    }

    pub fn velocity_at_volume(&self, v: f64) -> Result<f64> {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("v must be positive, got {v}")));
        }
        let jump =
            2.0 / (self.gamma - 1.0) * (self.sound_speed(self.anchor.v) - self.sound_speed(v));
        Ok(self.anchor.u - self.family.sign() * jump)
    }

    pub fn velocity_at_pressure(&self, p: f64) -> f64 {
        let v = self.volume_at_pressure(p);
        let jump =
            2.0 / (self.gamma - 1.0) * (self.sound_speed(self.anchor.v) - self.sound_speed(v));
        self.anchor.u - self.family.sign() * jump
    }

    /// `du/dp` along the curve. Negative for family 1, positive for family 3.
    pub fn velocity_pressure_slope(&self, p: f64) -> f64 {
        let c = self.sound_speed(self.volume_at_pressure(p));
        self.family.sign() * c / (self.gamma * p)
    }

    pub fn state_at_volume(&self, v: f64) -> Result<EndState> {
        EndState::new(
            v,
            self.velocity_at_volume(v)?,
            self.temperature_at_volume(v),
        )
    }
}
