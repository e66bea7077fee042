use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constants of an ideal polytropic, viscous, heat-conducting gas.
///
/// The specific heat `c_v = R / (gamma - 1)` is always derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGas")]
pub struct GasModel {
    gamma: f64,
    r: f64,
    a: f64,
    mu: f64,
    kappa: f64,
}

#[derive(Deserialize)]
struct RawGas {
    gamma: f64,
    r: f64,
    a: f64,
    mu: f64,
    kappa: f64,
}

impl TryFrom<RawGas> for GasModel {
    type Error = Error;

    fn try_from(raw: RawGas) -> Result<Self> {
        GasModel::new(raw.gamma, raw.r, raw.a, raw.mu, raw.kappa)
    }
}

/// Genuinely nonlinear characteristic family: 1 (left-going, `lambda < 0`)
/// or 3 (right-going, `lambda > 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    One,
    Three,
}

impl Family {
    /// Sign of the characteristic speed of this family.
    pub fn sign(self) -> f64 {
        match self {
            Family::One => -1.0,
            Family::Three => 1.0,
        }
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

impl GasModel {
    pub fn new(gamma: f64, r: f64, a: f64, mu: f64, kappa: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::domain(format!("gamma must exceed 1, got {gamma}")));
        }
        positive("R", r)?;
        positive("A", a)?;
        positive("mu", mu)?;
        positive("kappa", kappa)?;
        Ok(Self {
            gamma,
            r,
            a,
            mu,
            kappa,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Specific heat at constant volume.
    pub fn cv(&self) -> f64 {
        self.r / (self.gamma - 1.0)
    }

    /// Copy of this model with a different viscosity.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.gamma, self.r, self.a, mu, self.kappa)
    }

    /// `s = c_v ln(R theta / A) + R ln v`.
    pub fn entropy(&self, v: f64, theta: f64) -> Result<f64> {
        positive("v", v)?;
        positive("theta", theta)?;
        Ok(self.cv() * (self.r * theta / self.a).ln() + self.r * v.ln())
    }

    /// Temperature of the state with volume `v` and entropy `s`.
    pub fn temperature(&self, v: f64, s: f64) -> Result<f64> {
        positive("v", v)?;
        Ok(self.a / self.r * ((s - self.r * v.ln()) / self.cv()).exp())
    }

    /// `p = R theta / v`.
    pub fn pressure(&self, v: f64, theta: f64) -> Result<f64> {
        positive("v", v)?;
        positive("theta", theta)?;
        Ok(self.r * theta / v)
    }

    /// Entropy form of the state equation, `p = A v^-gamma exp((gamma-1) s / R)`.
    pub fn pressure_from_entropy(&self, v: f64, s: f64) -> Result<f64> {
        positive("v", v)?;
        Ok(self.isentrope_coefficient(s) * v.powf(-self.gamma))
    }

    /// `B(s) = A exp(s / c_v)`, so that `p = B v^-gamma` along the isentrope.
    pub fn isentrope_coefficient(&self, s: f64) -> f64 {
        self.a * (s / self.cv()).exp()
    }

    /// Characteristic speed `lambda = +-sqrt(A gamma v^(-gamma-1) e^((gamma-1)s/R))`.
    pub fn char_speed(&self, family: Family, v: f64, s: f64) -> Result<f64> {
        positive("v", v)?;
        let magnitude =
            (self.gamma * self.isentrope_coefficient(s) * v.powf(-self.gamma - 1.0)).sqrt();
        Ok(family.sign() * magnitude)
    }

    /// Specific volume at which `lambda_family(v, s) = w`. Requires `w` to
    /// carry the sign of the family.
    pub fn volume_for_speed(&self, family: Family, w: f64, s: f64) -> Result<f64> {
        if !(w * family.sign() > 0.0) {
            return Err(Error::domain(format!(
                "speed {w} has the wrong sign for family {family:?}"
            )));
        }
        let k2 = self.gamma * self.isentrope_coefficient(s);
        Ok((k2 / (w * w)).powf(1.0 / (self.gamma + 1.0)))
    }
}

/// A constant state `(v, u, theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl EndState {
    pub fn new(v: f64, u: f64, theta: f64) -> Result<Self> {
        let state = Self { v, u, theta };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        positive("v", self.v)?;
        positive("theta", self.theta)?;
        if !self.u.is_finite() {
            return Err(Error::domain(format!("u must be finite, got {}", self.u)));
        }
        Ok(())
    }

    pub fn pressure(&self, gas: &GasModel) -> f64 {
        gas.r() * self.theta / self.v
    }

    pub fn entropy(&self, gas: &GasModel) -> f64 {
        gas.cv() * (gas.r() * self.theta / gas.a()).ln() + gas.r() * self.v.ln()
    }

    /// The same state seen from a frame moving with velocity `-du`.
    pub fn shifted(&self, du: f64) -> Self {
        Self {
            u: self.u + du,
            ..*self
        }
    }

    /// Component-wise l1 distance.
    pub fn l1_distance(&self, other: &EndState) -> f64 {
        (self.v - other.v).abs() + (self.u - other.u).abs() + (self.theta - other.theta).abs()
    }
}
