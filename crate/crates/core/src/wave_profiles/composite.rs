use super::contact::ContactWave;
use super::rarefaction::SmoothRarefaction;
use super::self_similar::{DEFAULT_HALF_WIDTH, DEFAULT_NODES};
use super::{centered_difference, Profile, ProfileSample};
use crate::euler_riemann::{EndState, Family, GasModel, WaveDecomposition};
use crate::{Error, Result};

/// Component samples of the composite ansatz, in the frame `u_m = 0`.
#[derive(Clone, Copy, Debug)]
pub struct CompositeSample {
    pub contact: ProfileSample,
    pub rare1: ProfileSample,
    pub rare3: ProfileSample,
    pub total: ProfileSample,
}

/// Superposition of the 1-rarefaction, the viscous contact wave and the
/// 3-rarefaction:
///
/// `(V, U, Theta) = contact + rare1 + rare3 - (v_-^m + v_+^m, 0, theta_-^m + theta_+^m)`.
///
/// The components are built in the frame where the intermediate velocity is
/// zero; `frame_velocity` (the original `u_m`) is added back to `U`.
#[derive(Clone, Debug)]
pub struct CompositeProfile {
    pub contact: ContactWave,
    pub rare1: SmoothRarefaction,
    pub rare3: SmoothRarefaction,
    pub offsets: [f64; 3],
    pub decomposition: WaveDecomposition,
    pub frame_velocity: f64,
    gas: GasModel,
}

impl CompositeProfile {
    pub fn new(gas: &GasModel, decomposition: &WaveDecomposition) -> Result<Self> {
        Self::with_grid(gas, decomposition, DEFAULT_HALF_WIDTH, DEFAULT_NODES, 1e-10)
    }

    pub fn with_grid(
        gas: &GasModel,
        decomposition: &WaveDecomposition,
        half_width: f64,
        nodes: usize,
        tol: f64,
    ) -> Result<Self> {
        let d = decomposition.normalized();
        let contact = ContactWave::with_grid(
            gas,
            d.theta_minus_m,
            d.theta_plus_m,
            d.p_m,
            half_width,
            nodes,
            tol,
        )?;
        let rare1 = SmoothRarefaction::new(gas, Family::One, &d.left, &d.mid_left())?;
        let rare3 = SmoothRarefaction::new(gas, Family::Three, &d.right, &d.mid_right())?;
        let profile = Self {
            contact,
            rare1,
            rare3,
            offsets: [
                d.v_minus_m + d.v_plus_m,
                0.0,
                d.theta_minus_m + d.theta_plus_m,
            ],
            decomposition: *decomposition,
            frame_velocity: decomposition.u_m,
            gas: *gas,
        };
        profile.check_positivity()?;
        Ok(profile)
    }

    /// Samples the ansatz over the region the waves occupy for `t <= 100` and
    /// rejects it if `V` or `Theta` is not positive.
    fn check_positivity(&self) -> Result<()> {
        let reach = 100.0
            * (self
                .rare1
                .burgers
                .w_l
                .abs()
                .max(self.rare3.burgers.w_r.abs()))
            + 50.0;
        for &t in &[0.0, 1.0, 10.0, 100.0] {
            for i in 0..=2000 {
                let x = -reach + 2.0 * reach * i as f64 / 2000.0;
                let s = self.sample(x, t);
                if !(s.v > 0.0 && s.theta > 0.0) {
                    return Err(Error::StrengthTooLarge(format!(
                        "ansatz not positive at x = {x}, t = {t} (V = {}, Theta = {})",
                        s.v, s.theta
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn components(&self, x: f64, t: f64) -> CompositeSample {
        let contact = self.contact.sample(x, t);
        let rare1 = self.rare1.sample(x, t);
        let rare3 = self.rare3.sample(x, t);
        let [ov, ou, ot] = self.offsets;
        let total = ProfileSample {
            v: contact.v + rare1.v + rare3.v - ov,
            u: contact.u + rare1.u + rare3.u - ou,
            theta: contact.theta + rare1.theta + rare3.theta - ot,
            v_x: contact.v_x + rare1.v_x + rare3.v_x,
            u_x: contact.u_x + rare1.u_x + rare3.u_x,
            theta_x: contact.theta_x + rare1.theta_x + rare3.theta_x,
            v_t: contact.v_t + rare1.v_t + rare3.v_t,
            u_t: contact.u_t + rare1.u_t + rare3.u_t,
            theta_t: contact.theta_t + rare1.theta_t + rare3.theta_t,
        };
        CompositeSample {
            contact,
            rare1,
            rare3,
            total,
        }
    }

    /// `(U_-^r)_x + (U_+^r)_x`, the weight of the rarefaction dissipation.
    pub fn rarefaction_compression(&self, x: f64, t: f64) -> f64 {
        self.rare1.sample(x, t).u_x + self.rare3.sample(x, t).u_x
    }

    /// Source terms `(F, G)` of the perturbation system around the ansatz:
    ///
    /// `F = (P_- + P_+ - P)_x + (mu U_x / V)_x - U^cd_t`,
    /// `G = (p^m - P) U^cd_x + (P_- - P)(U_-^r)_x + (P_+ - P)(U_+^r)_x
    ///      + mu U_x^2 / V + kappa (Theta_x / V - Theta^cd_x / V^cd)_x`.
    pub fn sources(&self, x: f64, t: f64) -> (f64, f64) {
        let r = self.gas.r();
        let mu = self.gas.mu();
        let kappa = self.gas.kappa();
        let p_m = self.decomposition.p_m;
        let c = self.components(x, t);
        let total = c.total;
        let p = total.pressure(r);
        let p1 = c.rare1.pressure(r);
        let p3 = c.rare3.pressure(r);
        let h = self.contact.physical_spacing(t);

        let viscous = centered_difference(
            |y| {
                let s = self.components(y, t).total;
                mu * s.u_x / s.v
            },
            x,
            h,
        );
        let f = c.rare1.pressure_x(r) + c.rare3.pressure_x(r) - total.pressure_x(r) + viscous
            - c.contact.u_t;

        let conduction = centered_difference(
            |y| {
                let s = self.components(y, t);
                kappa * (s.total.theta_x / s.total.v - s.contact.theta_x / s.contact.v)
            },
            x,
            h,
        );
        let g = (p_m - p) * c.contact.u_x
            + (p1 - p) * c.rare1.u_x
            + (p3 - p) * c.rare3.u_x
            + mu * total.u_x * total.u_x / total.v
            + conduction;
        (f, g)
    }

    /// Bounds `[lambda_-(v_-^m, s_-) t / 2, lambda_+(v_+^m, s_+) t / 2]` of the
    /// region between the two rarefaction fans where the contact lives.
    pub fn central_region(&self, t: f64) -> (f64, f64) {
        (
            0.5 * self.rare1.burgers.w_r * t,
            0.5 * self.rare3.burgers.w_l * t,
        )
    }

    /// Reference value `c0 = min{|lambda_-^m|, lambda_+^m, c1 lambda_-^m^2,
    /// c1 lambda_+^m^2, 1} / 10` of the interaction decay rate.
    pub fn c0_reference(&self, c1: f64) -> f64 {
        let lm = self.rare1.burgers.w_r.abs();
        let lp = self.rare3.burgers.w_l.abs();
        0.1 * lm.min(lp).min(c1 * lm * lm).min(c1 * lp * lp).min(1.0)
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }
}

impl Profile for CompositeProfile {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        let mut s = self.components(x, t).total;
        s.u += self.frame_velocity;
        s
    }

    fn far_field(&self) -> (EndState, EndState) {
        (self.decomposition.left, self.decomposition.right)
    }
}
