use super::burgers::BurgersWave;
use super::{Profile, ProfileSample};
use crate::euler_riemann::{EndState, Family, GasModel, Isentrope};
use crate::{Error, Result};

/// Smooth approximate rarefaction wave: `lambda(V, s*) = w(x, t)` with `w` the
/// Burgers wave joining the characteristic speeds of the two ends, `U` from
/// the rarefaction curve and `Theta` from the isentropic relation.
#[derive(Clone, Debug)]
pub struct SmoothRarefaction {
    pub family: Family,
    pub burgers: BurgersWave,
    pub s_star: f64,
    /// The far-field state of the family (left state for family 1, right
    /// state for family 3).
    pub anchor: EndState,
    curve: Isentrope,
    gas: GasModel,
}

impl SmoothRarefaction {
    /// Rarefaction of `family` joining `anchor` to `intermediate`. Both
    /// states must share the entropy and lie on one rarefaction curve.
    pub fn new(
        gas: &GasModel,
        family: Family,
        anchor: &EndState,
        intermediate: &EndState,
    ) -> Result<Self> {
        anchor.validate()?;
        intermediate.validate()?;
        let curve = Isentrope::through(gas, family, anchor);
        let s_star = curve.entropy;
        let entropy_gap = (intermediate.entropy(gas) - s_star).abs();
        let u_gap = (curve.velocity_at_volume(intermediate.v)? - intermediate.u).abs();
        if entropy_gap > 1e-9 * (1.0 + s_star.abs()) || u_gap > 1e-8 * (1.0 + intermediate.u.abs())
        {
            return Err(Error::PatternMismatch(format!(
                "intermediate state is not on the {family:?} rarefaction curve (entropy gap {entropy_gap:.3e}, velocity gap {u_gap:.3e})"
            )));
        }
        let anchor_speed = gas.char_speed(family, anchor.v, s_star)?;
        let mid_speed = gas.char_speed(family, intermediate.v, s_star)?;
        let (w_l, w_r) = match family {
            Family::One => (anchor_speed, mid_speed),
            Family::Three => (mid_speed, anchor_speed),
        };
        let burgers = BurgersWave::new(w_l, w_r).map_err(|_| {
            Error::PatternMismatch(format!(
                "{family:?} wave between v = {} and v = {} is compressive",
                anchor.v, intermediate.v
            ))
        })?;
        Ok(Self {
            family,
            burgers,
            s_star,
            anchor: *anchor,
            curve,
            gas: *gas,
        })
    }

    /// Limits as `x -> -inf` and `x -> +inf`.
    pub fn end_states(&self) -> (EndState, EndState) {
        let state = |w: f64| {
            let v = self.volume(w);
            EndState {
                v,
                u: self.curve.velocity_at_volume(v).unwrap_or(f64::NAN),
                theta: self.temperature(v),
            }
        };
        (state(self.burgers.w_l), state(self.burgers.w_r))
    }

    fn volume(&self, w: f64) -> f64 {
        if self.burgers.w_l == self.burgers.w_r {
            return self.anchor.v;
        }
        self.gas
            .volume_for_speed(self.family, w, self.s_star)
            .unwrap_or(f64::NAN)
    }

    fn temperature(&self, v: f64) -> f64 {
        self.anchor.theta * (self.anchor.v / v).powf(self.gas.gamma() - 1.0)
    }

    pub fn wave_strength(&self) -> f64 {
        self.burgers.w_r - self.burgers.w_l
    }
}

impl Profile for SmoothRarefaction {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        if self.burgers.w_l == self.burgers.w_r {
            return ProfileSample::constant(&self.anchor);
        }
        let (w, w_x) = self.burgers.eval(x, t);
        let gamma = self.gas.gamma();
        let v = self.volume(w);
        let u = self.curve.velocity_at_volume(v).unwrap_or(f64::NAN);
        let theta = self.temperature(v);
        let dv_dw = -2.0 / (gamma + 1.0) * v / w;
        let w_t = -w * w_x;
        let v_x = dv_dw * w_x;
        let v_t = dv_dw * w_t;
        // du/dV = -lambda(V) = -w, dTheta/dV = -(gamma-1) Theta / V
        let dtheta_dv = -(gamma - 1.0) * theta / v;
        ProfileSample {
            v,
            u,
            theta,
            v_x,
            u_x: -w * v_x,
            theta_x: dtheta_dv * v_x,
            v_t,
            u_t: -w * v_t,
            theta_t: dtheta_dv * v_t,
        }
    }

    fn far_field(&self) -> (EndState, EndState) {
        self.end_states()
    }
}
