use serde::Serialize;

use super::functional::{phi_func, phi_roots};
use super::norms::{derivative, trapezoid};
use crate::euler_riemann::GasModel;
use crate::ns_solver::{FlowState, Grid};
use crate::wave_profiles::{CompositeProfile, Profile, ProfileSample};
use crate::{Error, Result};

/// Profile values at every grid node at time `t`.
pub fn sample_profile(profile: &dyn Profile, grid: &Grid, t: f64) -> Vec<ProfileSample> {
    grid.nodes().map(|x| profile.sample(x, t)).collect()
}

/// `(phi, psi, zeta)` at the grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationFields {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub zeta: Vec<f64>,
}

impl PerturbationFields {
    pub fn components(&self) -> [&[f64]; 3] {
        [&self.phi, &self.psi, &self.zeta]
    }
}

pub fn perturbation_fields(state: &FlowState, samples: &[ProfileSample]) -> PerturbationFields {
    let zip = |f: &[f64], g: fn(&ProfileSample) -> f64| -> Vec<f64> {
        f.iter().zip(samples).map(|(a, s)| a - g(s)).collect()
    };
    PerturbationFields {
        phi: zip(&state.v, |s| s.v),
        psi: zip(&state.u, |s| s.u),
        zeta: zip(&state.theta, |s| s.theta),
    }
}

fn check_positive(state: &FlowState, samples: &[ProfileSample]) -> Result<()> {
    for (i, s) in samples.iter().enumerate() {
        let values = [state.v[i], state.theta[i], s.v, s.theta];
        if values.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::domain(format!(
                "diagnostics need positive v, theta, V, Theta; node {i} has {values:?}"
            )));
        }
    }
    Ok(())
}

/// `E = int psi^2/2 + R Theta Phi(v/V) + c_v Theta Phi(theta/Theta) dx`.
pub fn basic_energy(
    gas: &GasModel,
    state: &FlowState,
    samples: &[ProfileSample],
    grid: &Grid,
) -> Result<f64> {
    check_positive(state, samples)?;
    let (r, cv) = (gas.r(), gas.cv());
    let density: Vec<f64> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let psi = state.u[i] - s.u;
            Ok(0.5 * psi * psi
                + r * s.theta * phi_func(state.v[i] / s.v)?
                + cv * s.theta * phi_func(state.theta[i] / s.theta)?)
        })
        .collect::<Result<_>>()?;
    Ok(trapezoid(&density, grid.h()))
}

/// `D = int psi_x^2 / (theta v) + zeta_x^2 / (theta^2 v) dx`.
pub fn dissipation(state: &FlowState, samples: &[ProfileSample], grid: &Grid) -> Result<f64> {
    check_positive(state, samples)?;
    let fields = perturbation_fields(state, samples);
    let h = grid.h();
    let psi_x = derivative(&fields.psi, h);
    let zeta_x = derivative(&fields.zeta, h);
    let density: Vec<f64> = (0..state.len())
        .map(|i| {
            let (v, th) = (state.v[i], state.theta[i]);
            psi_x[i] * psi_x[i] / (th * v) + zeta_x[i] * zeta_x[i] / (th * th * v)
        })
        .collect();
    Ok(trapezoid(&density, h))
}

/// `int f^2 w^2 dx` with the heat-kernel weight
/// `w = (1 + t)^(-1/2) exp(-alpha x^2 / (1 + t))`.
pub fn weighted_l2(field: &[f64], grid: &Grid, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!(
            "weight exponent must be positive, got {alpha}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be nonnegative, got {t}")));
    }
    let s = 1.0 + t;
    let density: Vec<f64> = grid
        .nodes()
        .zip(field)
        .map(|(x, f)| f * f * (-2.0 * alpha * x * x / s).exp() / s)
        .collect();
    Ok(trapezoid(&density, grid.h()))
}

/// Unit-cell averages of `v/V` and `theta/Theta` against the bracket
/// `[alpha1, alpha2]` from [`phi_roots`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellCheck {
    pub alpha1: f64,
    pub alpha2: f64,
    /// Left edge `k` of every checked cell `[k, k + 1]`.
    pub cells: Vec<i64>,
    pub v_average: Vec<f64>,
    pub theta_average: Vec<f64>,
    pub passed: Vec<bool>,
    /// Partial cells at the two ends that were not checked.
    pub skipped: usize,
}

impl CellCheck {
    pub fn all_passed(&self) -> bool {
        self.passed.iter().all(|p| *p)
    }

    pub fn failures(&self) -> usize {
        self.passed.iter().filter(|p| !**p).count()
    }
}

/// Exact integral over `[a, b]` of the piecewise-linear interpolant.
fn interval_integral(values: &[f64], grid: &Grid, a: f64, b: f64) -> f64 {
    let h = grid.h();
    let n = grid.len();
    let first = (((a - grid.x_min()) / h).floor().max(0.0) as usize).min(n - 2);
    let mut total = 0.0;
    for i in first..n - 1 {
        let (x0, x1) = (grid.x(i), grid.x(i + 1));
        if x0 >= b {
            break;
        }
        let s = x0.max(a);
        let e = x1.min(b);
        if e <= s {
            continue;
        }
        let mid = 0.5 * (s + e);
        let f = values[i] + (values[i + 1] - values[i]) * (mid - x0) / h;
        total += (e - s) * f;
    }
    total
}

pub fn cell_average_check(
    state: &FlowState,
    samples: &[ProfileSample],
    grid: &Grid,
    c0: f64,
) -> Result<CellCheck> {
    let (alpha1, alpha2) = phi_roots(c0)?;
    let v_ratio: Vec<f64> = state.v.iter().zip(samples).map(|(v, s)| v / s.v).collect();
    let theta_ratio: Vec<f64> = state
        .theta
        .iter()
        .zip(samples)
        .map(|(t, s)| t / s.theta)
        .collect();
    let first = grid.x_min().ceil() as i64;
    let last = grid.x_max().floor() as i64;
    let mut skipped = 0;
    if (first as f64) > grid.x_min() {
        skipped += 1;
    }
    if (last as f64) < grid.x_max() {
        skipped += 1;
    }
    let lo = alpha1 * (1.0 - 1e-12);
    let hi = alpha2 * (1.0 + 1e-12);
    let mut check = CellCheck {
        alpha1,
        alpha2,
        cells: Vec::new(),
        v_average: Vec::new(),
        theta_average: Vec::new(),
        passed: Vec::new(),
        skipped,
    };
    for k in first..last {
        let (a, b) = (k as f64, (k + 1) as f64);
        let v_avg = interval_integral(&v_ratio, grid, a, b);
        let th_avg = interval_integral(&theta_ratio, grid, a, b);
        check.cells.push(k);
        check.v_average.push(v_avg);
        check.theta_average.push(th_avg);
        check
            .passed
            .push((lo..=hi).contains(&v_avg) && (lo..=hi).contains(&th_avg));
    }
    Ok(check)
}

/// `int P (Phi(theta V / (Theta v)) + gamma Phi(v / V)) (U1_x + U3_x) dx` where
/// `P` is the composite pressure and `U1_x + U3_x` the rarefaction
/// compression rate.
pub fn rarefaction_dissipation(
    gas: &GasModel,
    state: &FlowState,
    samples: &[ProfileSample],
    composite: &CompositeProfile,
    grid: &Grid,
) -> Result<f64> {
    check_positive(state, samples)?;
    let gamma = gas.gamma();
    let density: Vec<f64> = grid
        .nodes()
        .enumerate()
        .map(|(i, x)| {
            let s = &samples[i];
            let weight = composite.rarefaction_compression(x, state.t);
            if weight == 0.0 {
                return Ok(0.0);
            }
            let p = s.pressure(gas.r());
            let (v, th) = (state.v[i], state.theta[i]);
            Ok(p * (phi_func(th * s.v / (s.theta * v))? + gamma * phi_func(v / s.v)?) * weight)
        })
        .collect::<Result<_>>()?;
    Ok(trapezoid(&density, grid.h()))
}
