use super::grid::Grid;
use super::state::FlowState;
use crate::euler_riemann::GasModel;
use crate::wave_profiles::Profile;
use crate::{Error, Result};

/// Extra source terms `(S_v, S_u, S_e)` added to the mass, momentum and
/// internal-energy equations. The energy source is divided by `c_v`.
pub trait Forcing: Sync {
    fn source(&self, x: f64, t: f64) -> [f64; 3];
}

/// Time derivatives of the three nodal fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derivatives {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Derivatives {
    fn zeros(n: usize) -> Self {
        Self {
            v: vec![0.0; n],
            u: vec![0.0; n],
            theta: vec![0.0; n],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rhs_into(
    gas: &GasModel,
    grid: &Grid,
    t: f64,
    state: (&[f64], &[f64], &[f64]),
    boundary: &dyn Profile,
    forcing: Option<&dyn Forcing>,
    face: &mut [Vec<f64>; 3],
    out: &mut Derivatives,
) -> Result<()> {
    let (v, u, theta) = state;
    let n = grid.len();
    let h = grid.h();
    let inv_h = 1.0 / h;
    let inv_2h = 0.5 * inv_h;
    let (r, mu, kappa, inv_cv) = (gas.r(), gas.mu(), gas.kappa(), 1.0 / gas.cv());

    let [inv_v, flux_u, flux_theta] = face;
    for i in 0..n {
        inv_v[i] = 1.0 / v[i];
    }
    for i in 0..n - 1 {
        let w = 2.0 * inv_h / (v[i] + v[i + 1]);
        flux_u[i] = (u[i + 1] - u[i]) * w;
        flux_theta[i] = (theta[i + 1] - theta[i]) * w;
    }
    for i in 1..n - 1 {
        let u_x = (u[i + 1] - u[i - 1]) * inv_2h;
        let p = r * theta[i] * inv_v[i];
        let p_x = r * (theta[i + 1] * inv_v[i + 1] - theta[i - 1] * inv_v[i - 1]) * inv_2h;
        out.v[i] = u_x;
        out.u[i] = -p_x + mu * (flux_u[i] - flux_u[i - 1]) * inv_h;
        out.theta[i] = (-p * u_x
            + kappa * (flux_theta[i] - flux_theta[i - 1]) * inv_h
            + mu * u_x * u_x * inv_v[i])
            * inv_cv;
    }
    if let Some(forcing) = forcing {
        for i in 1..n - 1 {
            let [sv, su, se] = forcing.source(grid.x(i), t);
            out.v[i] += sv;
            out.u[i] += su;
            out.theta[i] += se * inv_cv;
        }
    }
    for i in [0, n - 1] {
        let s = boundary.sample(grid.x(i), t);
        out.v[i] = s.v_t;
        out.u[i] = s.u_t;
        out.theta[i] = s.theta_t;
    }
    let total: f64 = out.v.iter().chain(&out.u).chain(&out.theta).sum();
    if !total.is_finite() {
        for i in 0..n {
            if !(out.v[i].is_finite() && out.u[i].is_finite() && out.theta[i].is_finite()) {
                return Err(Error::numeric(
                    format!("non-finite time derivative at node {i}, t = {t}"),
                    None,
                ));
            }
        }
    }
    Ok(())
}

/// Semi-discrete right-hand side. The end nodes receive the time derivatives
/// of `boundary`, so a pinned boundary stays on the profile.
pub fn rhs(
    gas: &GasModel,
    grid: &Grid,
    state: &FlowState,
    boundary: &dyn Profile,
    forcing: Option<&dyn Forcing>,
) -> Result<Derivatives> {
    let n = grid.len();
    check_len(grid, state)?;
    let mut face = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut out = Derivatives::zeros(n);
    rhs_into(
        gas,
        grid,
        state.t,
        (&state.v, &state.u, &state.theta),
        boundary,
        forcing,
        &mut face,
        &mut out,
    )?;
    Ok(out)
}

fn check_len(grid: &Grid, state: &FlowState) -> Result<()> {
    let n = grid.len();
    if state.v.len() != n || state.u.len() != n || state.theta.len() != n {
        return Err(Error::domain(format!(
            "state has {} nodes but the grid has {n}",
            state.v.len()
        )));
    }
    Ok(())
}

/// Largest explicit step allowed by the diffusive and acoustic limits, scaled
/// by `safety`.
pub fn stable_dt(gas: &GasModel, grid: &Grid, state: &FlowState, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::domain(format!(
            "safety factor must lie in (0, 1], got {safety}"
        )));
    }
    let h = grid.h();
    let (mu, kappa_cv, gamma, r) = (gas.mu(), gas.kappa() / gas.cv(), gas.gamma(), gas.r());
    let mut diffusivity = 0.0_f64;
    let mut speed = 0.0_f64;
    for i in 0..state.len() {
        let v = state.v[i];
        diffusivity = diffusivity.max(mu.max(kappa_cv) / v);
        speed = speed.max(gamma * r * state.theta[i] / (v * v));
    }
    let speed = speed.sqrt();
    let mut dt = f64::INFINITY;
    if diffusivity > 0.0 {
        dt = dt.min(h * h / (2.0 * diffusivity));
    }
    if speed > 0.0 {
        dt = dt.min(h / speed);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::numeric("no finite stable step for this state", None));
    }
    Ok(safety * dt)
}

/// Reusable classical Runge-Kutta integrator.
pub struct Stepper<'a> {
    gas: GasModel,
    grid: Grid,
    boundary: &'a dyn Profile,
    forcing: Option<&'a dyn Forcing>,
    face: [Vec<f64>; 3],
    stages: [Derivatives; 4],
    work: [Vec<f64>; 3],
}

impl<'a> Stepper<'a> {
    pub fn new(gas: &GasModel, grid: &Grid, boundary: &'a dyn Profile) -> Self {
        let n = grid.len();
        Self {
            gas: *gas,
            grid: *grid,
            boundary,
            forcing: None,
            face: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            stages: std::array::from_fn(|_| Derivatives::zeros(n)),
            work: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn with_forcing(mut self, forcing: &'a dyn Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    fn stage(
        &mut self,
        k: usize,
        t: f64,
        state: &FlowState,
        from: Option<(usize, f64)>,
    ) -> Result<()> {
        let n = self.grid.len();
        if let Some((prev, c)) = from {
            let d = &self.stages[prev];
            for i in 0..n {
                self.work[0][i] = state.v[i] + c * d.v[i];
                self.work[1][i] = state.u[i] + c * d.u[i];
                self.work[2][i] = state.theta[i] + c * d.theta[i];
            }
            self.pin(t);
        } else {
            self.work[0].copy_from_slice(&state.v);
            self.work[1].copy_from_slice(&state.u);
            self.work[2].copy_from_slice(&state.theta);
        }
        let [wv, wu, wt] = &self.work;
        rhs_into(
            &self.gas,
            &self.grid,
            t,
            (wv, wu, wt),
            self.boundary,
            self.forcing,
            &mut self.face,
            &mut self.stages[k],
        )
    }

    fn pin(&mut self, t: f64) {
        let n = self.grid.len();
        for i in [0, n - 1] {
            let s = self.boundary.sample(self.grid.x(i), t);
            self.work[0][i] = s.v;
            self.work[1][i] = s.u;
            self.work[2][i] = s.theta;
        }
    }

    /// Advances `state` in place by `dt`.
    pub fn step(&mut self, state: &mut FlowState, dt: f64) -> Result<()> {
        check_len(&self.grid, state)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let t = state.t;
        self.stage(0, t, state, None)?;
        self.stage(1, t + 0.5 * dt, state, Some((0, 0.5 * dt)))?;
        self.stage(2, t + 0.5 * dt, state, Some((1, 0.5 * dt)))?;
        self.stage(3, t + dt, state, Some((2, dt)))?;
        let n = self.grid.len();
        let w = dt / 6.0;
        let [k1, k2, k3, k4] = &self.stages;
        for i in 0..n {
            state.v[i] += w * (k1.v[i] + 2.0 * (k2.v[i] + k3.v[i]) + k4.v[i]);
            state.u[i] += w * (k1.u[i] + 2.0 * (k2.u[i] + k3.u[i]) + k4.u[i]);
            state.theta[i] += w * (k1.theta[i] + 2.0 * (k2.theta[i] + k3.theta[i]) + k4.theta[i]);
        }
        state.t = t + dt;
        for i in [0, n - 1] {
            let s = self.boundary.sample(self.grid.x(i), state.t);
            state.v[i] = s.v;
            state.u[i] = s.u;
            state.theta[i] = s.theta;
        }
        state.check_positive()
    }
}

/// One Runge-Kutta step of size `dt` with the end nodes pinned to `boundary`.
pub fn step(
    gas: &GasModel,
    grid: &Grid,
    state: &FlowState,
    dt: f64,
    boundary: &dyn Profile,
) -> Result<FlowState> {
    let mut next = state.clone();
    Stepper::new(gas, grid, boundary).step(&mut next, dt)?;
    Ok(next)
}
