use super::self_similar::{SelfSimilarProfile, DEFAULT_HALF_WIDTH, DEFAULT_NODES};
use super::{centered_difference, Profile, ProfileSample};
use crate::euler_riemann::{EndState, GasModel};
use crate::{Error, Result};

/// Viscous contact wave `V = (R / p_+) Theta`, `U = u_0 + kappa (gamma-1) /
/// (gamma R) Theta_x / Theta`, with `Theta` the self-similar diffusion
/// profile. `u_0` is the constant velocity of the frame (zero after
/// normalisation).
#[derive(Clone, Debug)]
pub struct ContactWave {
    pub profile: SelfSimilarProfile,
    pub p_plus: f64,
    pub gas: GasModel,
    pub u_base: f64,
}

impl ContactWave {
    pub fn new(gas: &GasModel, theta_minus: f64, theta_plus: f64, p_plus: f64) -> Result<Self> {
        Self::with_grid(
            gas,
            theta_minus,
            theta_plus,
            p_plus,
            DEFAULT_HALF_WIDTH,
            DEFAULT_NODES,
            1e-10,
        )
    }

    pub fn with_grid(
        gas: &GasModel,
        theta_minus: f64,
        theta_plus: f64,
        p_plus: f64,
        half_width: f64,
        nodes: usize,
        tol: f64,
    ) -> Result<Self> {
        let profile = SelfSimilarProfile::solve(
            gas,
            p_plus,
            theta_minus,
            theta_plus,
            half_width,
            nodes,
            tol,
        )?;
        Ok(Self {
            profile,
            p_plus,
            gas: *gas,
            u_base: 0.0,
        })
    }

    /// Contact wave between two contact-compatible states: equal velocity and
    /// equal pressure (relative tolerance `1e-10`).
    pub fn between(gas: &GasModel, left: &EndState, right: &EndState) -> Result<Self> {
        left.validate()?;
        right.validate()?;
        let (pl, pr) = (left.pressure(gas), right.pressure(gas));
        let scale = 1.0 + left.u.abs().max(right.u.abs());
        if (left.u - right.u).abs() > 1e-10 * scale || (pl - pr).abs() > 1e-10 * pl.max(pr) {
            return Err(Error::PatternMismatch(format!(
                "contact scenario requires u_- = u_+ and p_- = p_+ (got u {} vs {}, p {} vs {})",
                left.u, right.u, pl, pr
            )));
        }
        let mut wave = Self::new(gas, left.theta, right.theta, pr)?;
        wave.u_base = left.u;
        Ok(wave)
    }

    /// `kappa (gamma - 1) / (gamma R)`.
    fn velocity_coefficient(&self) -> f64 {
        let g = &self.gas;
        g.kappa() * (g.gamma() - 1.0) / (g.gamma() * g.r())
    }

    /// Physical spacing of the tabulated profile at time `t`.
    pub fn physical_spacing(&self, t: f64) -> f64 {
        2.0 * self.profile.half_width * (1.0 + t).sqrt() / self.profile.len() as f64
    }

    /// Strength `|theta_+ - theta_-|`.
    pub fn strength(&self) -> f64 {
        self.profile.strength()
    }

    /// Residuals `(R1, R2) = (U_t - mu (U_x / V)_x, -mu U_x^2 / V)` left over
    /// when the contact wave is substituted into the momentum and energy
    /// equations.
    pub fn residuals(&self, x: f64, t: f64) -> (f64, f64) {
        let sample = self.sample(x, t);
        let mu = self.gas.mu();
        let h = self.physical_spacing(t);
        let flux = |y: f64| {
            let s = self.sample(y, t);
            s.u_x / s.v
        };
        let r1 = sample.u_t - mu * centered_difference(flux, x, h);
        let r2 = -mu * sample.u_x * sample.u_x / sample.v;
        (r1, r2)
    }
}

impl Profile for ContactWave {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        let r = self.gas.r();
        let root = (1.0 + t).sqrt();
        let xi = x / root;
        let (theta, dtheta) = self.profile.eval(xi);
        let k = self.velocity_coefficient();
        let a = self.profile.a;
        let g = dtheta / theta;
        // (Theta'/Theta)' = -xi Theta' / (2a) along the profile ODE
        let g_prime = -xi * dtheta / (2.0 * a);
        let theta_x = dtheta / root;
        let theta_t = -0.5 * xi * dtheta / (1.0 + t);
        let u_x = k * g_prime / (1.0 + t);
        ProfileSample {
            v: r * theta / self.p_plus,
            u: self.u_base + k * g / root,
            theta,
            v_x: r * theta_x / self.p_plus,
            u_x,
            theta_x,
            v_t: r * theta_t / self.p_plus,
            u_t: -0.5 * k * (g + xi * g_prime) / (root * root * root),
            theta_t,
        }
    }

    fn far_field(&self) -> (EndState, EndState) {
        let r = self.gas.r();
        let state = |theta: f64| EndState {
            v: r * theta / self.p_plus,
            u: self.u_base,
            theta,
        };
        (
            state(self.profile.theta_minus),
            state(self.profile.theta_plus),
        )
    }
}
