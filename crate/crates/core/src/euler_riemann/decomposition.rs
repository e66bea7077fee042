use serde::{Deserialize, Serialize};

use super::curves::Isentrope;
use super::gas::{EndState, Family, GasModel};
use crate::{Error, Result};

/// Default tolerance on the velocity mismatch across the contact.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Iteration cap of the intermediate-pressure solve.
pub const MAX_ITERATIONS: usize = 100;
/// Slack allowed in the membership inequalities (zero-strength waves).
const MEMBERSHIP_SLACK: f64 = 1e-12;

/// Far-field states together with the intermediate states of the
/// 1-rarefaction / contact / 3-rarefaction pattern connecting them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveDecomposition {
    pub left: EndState,
    pub right: EndState,
    pub v_minus_m: f64,
    pub theta_minus_m: f64,
    pub v_plus_m: f64,
    pub theta_plus_m: f64,
    pub u_m: f64,
    pub p_m: f64,
    pub delta_r1: f64,
    pub delta_cd: f64,
    pub delta_r3: f64,
    pub s_minus: f64,
    pub s_plus: f64,
}

/// Result of evaluating the two membership inequalities of the pattern.
/// Each margin is `u_+ - (bound)`; the pattern holds when both are `>= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternMembership {
    /// Bound from the 1-rarefaction curve of the left state, evaluated at the
    /// volume on the left isentrope whose pressure is `p_+`.
    pub one_wave_margin: f64,
    /// Bound from the 3-rarefaction curve with entropy `s_+`, started at the
    /// volume whose pressure is `p_-`.
    pub three_wave_margin: f64,
    pub s_minus: f64,
    pub s_plus: f64,
}

impl PatternMembership {
    pub fn holds(&self) -> bool {
        self.one_wave_margin >= -MEMBERSHIP_SLACK && self.three_wave_margin >= -MEMBERSHIP_SLACK
    }
}

/// Evaluates the membership inequalities of the rarefaction-contact-rarefaction
/// region of `left` at `right`, with the closed-form curve integrals.
pub fn check_pattern_membership(
    gas: &GasModel,
    left: &EndState,
    right: &EndState,
) -> Result<PatternMembership> {
    left.validate()?;
    right.validate()?;
    let s_minus = left.entropy(gas);
    let s_plus = right.entropy(gas);
    let scale = gas.gamma() * gas.cv();

    // Volume on the s_- isentrope with the pressure of the right state.
    let v_star = right.v * ((s_minus - s_plus) / scale).exp();
    let one = Isentrope::through(gas, Family::One, left);
    let one_wave_margin = right.u - one.velocity_at_volume(v_star)?;

    // Volume on the s_+ isentrope with the pressure of the left state.
    let v_star_star = left.v * ((s_plus - s_minus) / scale).exp();
    let three_anchor = EndState::new(v_star_star, left.u, gas.temperature(v_star_star, s_plus)?)?;
    let three = Isentrope::through(gas, Family::Three, &three_anchor);
    let three_wave_margin = right.u - three.velocity_at_volume(right.v)?;

    Ok(PatternMembership {
        one_wave_margin,
        three_wave_margin,
        s_minus,
        s_plus,
    })
}

/// Finds the intermediate states of the rarefaction-contact-rarefaction
/// pattern connecting `left` to `right`.
///
/// Each rarefaction curve gives the velocity as a monotone function of the
/// intermediate pressure, so the solve is a one-dimensional Newton iteration
/// on `p_m` safeguarded by bisection. The intermediate velocity is returned
/// as is; [`WaveDecomposition::normalized`] moves to the frame with `u_m = 0`.
pub fn solve_wave_decomposition(
    gas: &GasModel,
    left: &EndState,
    right: &EndState,
    tol: f64,
) -> Result<WaveDecomposition> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let membership = check_pattern_membership(gas, left, right)?;
    let entropy_scale = 1.0 + membership.s_minus.abs().max(membership.s_plus.abs());
    if (membership.s_plus - membership.s_minus).abs() <= 1e-12 * entropy_scale {
        return Err(Error::PatternMismatch(
            "s_+ = s_-: the states carry no contact discontinuity".into(),
        ));
    }
    if membership.one_wave_margin < -MEMBERSHIP_SLACK {
        return Err(Error::PatternMismatch(format!(
            "u_+ lies below the 1-rarefaction bound by {:.3e}; a 1-shock is required",
            -membership.one_wave_margin
        )));
    }
    if membership.three_wave_margin < -MEMBERSHIP_SLACK {
        return Err(Error::PatternMismatch(format!(
            "u_+ lies below the 3-rarefaction bound by {:.3e}; a 3-shock is required",
            -membership.three_wave_margin
        )));
    }

    let one = Isentrope::through(gas, Family::One, left);
    let three = Isentrope::through(gas, Family::Three, right);
    let gm1 = gas.gamma() - 1.0;
    let escape =
        2.0 / gm1 * (one.sound_speed(left.v) + three.sound_speed(right.v)) + left.u - right.u;
    if !(escape > 0.0) {
        return Err(Error::PatternMismatch(
            "the rarefactions would open a vacuum between the states".into(),
        ));
    }

    let mismatch = |p: f64| one.velocity_at_pressure(p) - three.velocity_at_pressure(p);
    let slope = |p: f64| one.velocity_pressure_slope(p) - three.velocity_pressure_slope(p);

    let mut hi = left.pressure(gas).min(right.pressure(gas));
    let f_hi = mismatch(hi);
    let p_m = if f_hi.abs() <= tol {
        hi
    } else {
        // mismatch is decreasing in p and positive as p -> 0
        let mut lo = 0.5 * hi;
        let mut halvings = 0;
        while mismatch(lo) <= 0.0 {
            lo *= 0.5;
            halvings += 1;
            if halvings > 2000 || lo == 0.0 {
                return Err(Error::numeric(
                    "no bracket for the intermediate pressure",
                    Some(f_hi),
                ));
            }
        }
        let mut p = hi;
        let mut converged = None;
        for _ in 0..MAX_ITERATIONS {
            let f = mismatch(p);
            if f.abs() <= tol {
                converged = Some(p);
                break;
            }
            if f > 0.0 {
                lo = p;
            } else {
                hi = p;
            }
            let newton = p - f / slope(p);
            p = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        match converged {
            Some(p) => p,
            None => return Err(Error::numeric(
                format!(
                    "intermediate pressure solve did not converge in {MAX_ITERATIONS} iterations"
                ),
                Some(mismatch(p)),
            )),
        }
    };

    let v_minus_m = one.volume_at_pressure(p_m);
    let v_plus_m = three.volume_at_pressure(p_m);
    let u_m = 0.5 * (one.velocity_at_pressure(p_m) + three.velocity_at_pressure(p_m));
    Ok(WaveDecomposition::from_parts(
        gas, *left, *right, v_minus_m, v_plus_m, u_m, p_m,
    ))
}

impl WaveDecomposition {
    fn from_parts(
        gas: &GasModel,
        left: EndState,
        right: EndState,
        v_minus_m: f64,
        v_plus_m: f64,
        u_m: f64,
        p_m: f64,
    ) -> Self {
        let theta_minus_m = p_m * v_minus_m / gas.r();
        let theta_plus_m = p_m * v_plus_m / gas.r();
        let delta_r1 =
            (v_minus_m - left.v).abs() + (u_m - left.u).abs() + (theta_minus_m - left.theta).abs();
        let delta_r3 =
            (v_plus_m - right.v).abs() + (u_m - right.u).abs() + (theta_plus_m - right.theta).abs();
        Self {
            left,
            right,
            v_minus_m,
            theta_minus_m,
            v_plus_m,
            theta_plus_m,
            u_m,
            p_m,
            delta_r1,
            delta_cd: (theta_plus_m - theta_minus_m).abs(),
            delta_r3,
            s_minus: left.entropy(gas),
            s_plus: right.entropy(gas),
        }
    }

    /// Builds a pattern forward: starting from the left intermediate state,
    /// the right intermediate state is placed across a contact of strength
    /// `delta_cd` (temperature rising), then each far-field state is found by
    /// walking its rarefaction curve outward until the wave strength equals
    /// the requested value.
    pub fn compose(
        gas: &GasModel,
        v_minus_m: f64,
        theta_minus_m: f64,
        u_m: f64,
        delta_r1: f64,
        delta_cd: f64,
        delta_r3: f64,
    ) -> Result<Self> {
        for (name, d) in [
            ("delta_r1", delta_r1),
            ("delta_cd", delta_cd),
            ("delta_r3", delta_r3),
        ] {
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be non-negative, got {d}"
                )));
            }
        }
        let mid_left = EndState::new(v_minus_m, u_m, theta_minus_m)?;
        let p_m = mid_left.pressure(gas);
        let theta_plus_m = theta_minus_m + delta_cd;
        let mid_right = EndState::new(gas.r() * theta_plus_m / p_m, u_m, theta_plus_m)?;

        let left = walk_to_strength(gas, Family::One, &mid_left, delta_r1)?;
        let right = walk_to_strength(gas, Family::Three, &mid_right, delta_r3)?;
        Ok(Self::from_parts(
            gas,
            left,
            right,
            mid_left.v,
            mid_right.v,
            u_m,
            p_m,
        ))
    }

    pub fn mid_left(&self) -> EndState {
        EndState {
            v: self.v_minus_m,
            u: self.u_m,
            theta: self.theta_minus_m,
        }
    }

    pub fn mid_right(&self) -> EndState {
        EndState {
            v: self.v_plus_m,
            u: self.u_m,
            theta: self.theta_plus_m,
        }
    }

    /// Galilean shift of every velocity by `du`.
    pub fn shifted(&self, du: f64) -> Self {
        Self {
            left: self.left.shifted(du),
            right: self.right.shifted(du),
            u_m: self.u_m + du,
            ..*self
        }
    }

    /// The same pattern in the frame where the intermediate velocity vanishes.
    pub fn normalized(&self) -> Self {
        self.shifted(-self.u_m)
    }

    pub fn strength_sum(&self) -> f64 {
        self.delta_r1 + self.delta_cd + self.delta_r3
    }

    pub fn min_strength(&self) -> f64 {
        self.delta_r1.min(self.delta_cd).min(self.delta_r3)
    }

    /// `(delta_r1 + delta_cd + delta_r3) / |right - left|`, the constant of the
    /// comparability between the wave strengths and the end-state jump.
    pub fn comparability_ratio(&self) -> f64 {
        let jump = ((self.right.v - self.left.v).powi(2)
            + (self.right.u - self.left.u).powi(2)
            + (self.right.theta - self.left.theta).powi(2))
        .sqrt();
        self.strength_sum() / jump
    }

    /// Largest distance of either intermediate state from its rarefaction
    /// curve, plus the pressure mismatch across the contact.
    pub fn curve_residual(&self, gas: &GasModel) -> f64 {
        let one = Isentrope::through(gas, Family::One, &self.left);
        let three = Isentrope::through(gas, Family::Three, &self.right);
        let u1 = one.velocity_at_volume(self.v_minus_m).unwrap_or(f64::NAN);
        let u3 = three.velocity_at_volume(self.v_plus_m).unwrap_or(f64::NAN);
        let t1 = one.temperature_at_volume(self.v_minus_m);
        let t3 = three.temperature_at_volume(self.v_plus_m);
        let pressure_gap = (gas.r() * self.theta_minus_m / self.v_minus_m
            - gas.r() * self.theta_plus_m / self.v_plus_m)
            .abs();
        (u1 - self.u_m)
            .abs()
            .max((u3 - self.u_m).abs())
            .max((t1 - self.theta_minus_m).abs())
            .max((t3 - self.theta_plus_m).abs())
            .max(pressure_gap)
    }
}

/// Far-field state on the rarefaction curve through `mid` whose wave strength
/// (l1 distance from `mid`) equals `target`. The far state has the smaller
/// volume.
fn walk_to_strength(
    gas: &GasModel,
    family: Family,
    mid: &EndState,
    target: f64,
) -> Result<EndState> {
    if target == 0.0 {
        return Ok(*mid);
    }
    let curve = Isentrope::through(gas, family, mid);
    let strength = |v: f64| -> Result<f64> { Ok(curve.state_at_volume(v)?.l1_distance(mid)) };
    // strength grows monotonically as v decreases from mid.v towards 0
    let mut hi = mid.v;
    let mut far = 0.5 * mid.v;
    while strength(far)? < target {
        far *= 0.5;
        if far < 1e-12 * mid.v {
            return Err(Error::domain(format!(
                "wave strength {target} is not attainable"
            )));
        }
    }
    let mut lo = far;
    for _ in 0..200 {
        let mid_v = 0.5 * (lo + hi);
        if strength(mid_v)? > target {
            lo = mid_v;
        } else {
            hi = mid_v;
        }
        if hi - lo <= 1e-15 * mid.v {
            break;
        }
    }
    curve.state_at_volume(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasModel {
        GasModel::new(5.0 / 3.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn pure_contact_is_degenerate() {
        let left = EndState::new(1.0, 0.0, 1.0).unwrap();
        let right = EndState::new(1.2, 0.0, 1.2).unwrap();
        let dec = solve_wave_decomposition(&gas(), &left, &right, DEFAULT_TOL).unwrap();
        assert!(dec.delta_r1 < 1e-12 && dec.delta_r3 < 1e-12);
        assert!((dec.p_m - 1.0).abs() < 1e-12);
        assert!(dec.u_m.abs() < 1e-12);
        assert!((dec.delta_cd - 0.2).abs() < 1e-12);
    }

    #[test]
    fn shock_side_is_rejected() {
        let left = EndState::new(1.0, 0.0, 1.0).unwrap();
        let right = EndState::new(1.2, -0.5, 1.2).unwrap();
        let err = solve_wave_decomposition(&gas(), &left, &right, DEFAULT_TOL).unwrap_err();
        match err {
            Error::PatternMismatch(msg) => assert!(msg.contains("shock"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_entropy_is_rejected() {
        let g = gas();
        let left = EndState::new(1.0, 0.0, 1.0).unwrap();
        let right = Isentrope::through(&g, Family::Three, &left)
            .state_at_volume(0.9)
            .unwrap();
        assert!(matches!(
            solve_wave_decomposition(&g, &left, &right, DEFAULT_TOL),
            Err(Error::PatternMismatch(_))
        ));
    }

    #[test]
    fn membership_margins_match_curve_mismatch() {
        // margins vanish at the edges of the region: a pure 3-wave plus contact
        let g = gas();
        let left = EndState::new(1.0, 0.0, 1.0).unwrap();
        let dec = WaveDecomposition::compose(&g, 1.0, 1.0, 0.0, 0.0, 0.1, 0.05).unwrap();
        let m = check_pattern_membership(&g, &left, &dec.right).unwrap();
        assert!(m.three_wave_margin.abs() < 1e-12, "{m:?}");
        assert!(m.one_wave_margin > 0.0);
        let dec = WaveDecomposition::compose(&g, 1.0, 1.0, 0.0, 0.05, 0.1, 0.0).unwrap();
        let m = check_pattern_membership(&g, &dec.left, &dec.right).unwrap();
        assert!(m.one_wave_margin.abs() < 1e-12, "{m:?}");
    }

    #[test]
    fn composed_pattern_round_trips() {
        let g = gas();
        let dec = WaveDecomposition::compose(&g, 1.0, 1.0, 0.3, 0.1, 0.05, 0.08).unwrap();
        assert!((dec.delta_r1 - 0.1).abs() < 1e-12);
        assert!((dec.delta_r3 - 0.08).abs() < 1e-12);
        let solved = solve_wave_decomposition(&g, &dec.left, &dec.right, DEFAULT_TOL).unwrap();
        assert!((solved.v_minus_m - 1.0).abs() < 1e-9);
        assert!((solved.u_m - 0.3).abs() < 1e-9);
        assert!(solved.curve_residual(&g) < 1e-9);
        let n = solved.normalized();
        assert_eq!(n.u_m, 0.0);
        assert!((n.left.u - (dec.left.u - 0.3)).abs() < 1e-9);
    }
}
