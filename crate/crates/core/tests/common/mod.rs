//! Reference computations shared by the integration tests and the acceptance
//! runner. None of these reuse the library's own discretisations.
#![allow(dead_code)]

use contact_lab::euler_riemann::EndState;
use contact_lab::ns_solver::Forcing;
use contact_lab::wave_profiles::{Profile, ProfileSample};

/// Integrates `theta_t = a (ln theta)_xx` on `[-half, half]` with Dirichlet ends
/// from `initial` to `t_end` using a conservative three-point flux and the
/// explicit midpoint rule.
pub fn nonlinear_diffusion(
    a: f64,
    half: f64,
    n: usize,
    initial: impl Fn(f64) -> f64,
    t_end: f64,
) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * half / (n - 1) as f64;
    let x: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let mut th: Vec<f64> = x.iter().map(|&x| initial(x)).collect();
    let min = th.iter().cloned().fold(f64::INFINITY, f64::min);
    // Diffusivity a / theta; midpoint rule is stable for dt < h^2 theta / (2a).
    let dt_max = 0.25 * h * h * min / a;
    let steps = (t_end / dt_max).ceil() as usize;
    let dt = t_end / steps as f64;
    let rate = |th: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        let ln: Vec<f64> = th.iter().map(|t| t.ln()).collect();
        for i in 1..n - 1 {
            out[i] = a * (ln[i + 1] - 2.0 * ln[i] + ln[i - 1]) / (h * h);
        }
        out
    };
    for _ in 0..steps {
        let k1 = rate(&th);
        let mid: Vec<f64> = th.iter().zip(&k1).map(|(t, k)| t + 0.5 * dt * k).collect();
        let k2 = rate(&mid);
        for i in 0..n {
            th[i] += dt * k2[i];
        }
    }
    (x, th)
}

/// First-order Godunov scheme for `w_t + (w^2/2)_x = 0` on `[-half, half]`,
/// started from the tanh data of the smooth rarefaction.
pub fn upwind_burgers(w_l: f64, w_r: f64, half: f64, n: usize, t_end: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * half / (n - 1) as f64;
    let x: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let mut w: Vec<f64> = x
        .iter()
        .map(|x| 0.5 * (w_r + w_l) + 0.5 * (w_r - w_l) * x.tanh())
        .collect();
    let speed = w_l.abs().max(w_r.abs()).max(1e-12);
    let steps = (t_end / (0.4 * h / speed)).ceil() as usize;
    let dt = t_end / steps as f64;
    let flux = |a: f64, b: f64| -> f64 {
        // Exact Riemann flux of Burgers' equation.
        if a <= b {
            if a > 0.0 {
                0.5 * a * a
            } else if b < 0.0 {
                0.5 * b * b
            } else {
                0.0
            }
        } else {
            let s = 0.5 * (a + b);
            if s > 0.0 {
                0.5 * a * a
            } else {
                0.5 * b * b
            }
        }
    };
    for _ in 0..steps {
        let f: Vec<f64> = (0..n - 1).map(|i| flux(w[i], w[i + 1])).collect();
        for i in 1..n - 1 {
            w[i] -= dt / h * (f[i] - f[i - 1]);
        }
    }
    (x, w)
}

/// Smooth periodic-in-space fields with analytic forcing for the method of
/// manufactured solutions.
#[derive(Clone, Copy, Debug)]
pub struct Manufactured {
    pub r: f64,
    pub cv: f64,
    pub mu: f64,
    pub kappa: f64,
}

pub struct Fields {
    pub v: [f64; 4],
    pub u: [f64; 4],
    pub theta: [f64; 4],
}

impl Manufactured {
    /// `(f, f_x, f_xx, f_t)` for each field.
    pub fn fields(&self, x: f64, t: f64) -> Fields {
        let (s, c) = x.sin_cos();
        let (st, ct) = t.sin_cos();
        let e = (-0.5 * t).exp();
        let (sm, cm) = (x - t).sin_cos();
        Fields {
            v: [
                1.0 + 0.2 * s * ct,
                0.2 * c * ct,
                -0.2 * s * ct,
                -0.2 * s * st,
            ],
            u: [0.1 * cm, -0.1 * sm, -0.1 * cm, 0.1 * sm],
            theta: [
                1.0 + 0.15 * c * e,
                -0.15 * s * e,
                -0.15 * c * e,
                -0.075 * c * e,
            ],
        }
    }
}

impl Profile for Manufactured {
    fn sample(&self, x: f64, t: f64) -> ProfileSample {
        let f = self.fields(x, t);
        ProfileSample {
            v: f.v[0],
            u: f.u[0],
            theta: f.theta[0],
            v_x: f.v[1],
            u_x: f.u[1],
            theta_x: f.theta[1],
            v_t: f.v[3],
            u_t: f.u[3],
            theta_t: f.theta[3],
        }
    }

    fn far_field(&self) -> (EndState, EndState) {
        let s = EndState {
            v: 1.0,
            u: 0.0,
            theta: 1.0,
        };
        (s, s)
    }
}

impl Forcing for Manufactured {
    fn source(&self, x: f64, t: f64) -> [f64; 3] {
        let Fields { v, u, theta } = self.fields(x, t);
        let p = self.r * theta[0] / v[0];
        let p_x = self.r * (theta[1] / v[0] - theta[0] * v[1] / (v[0] * v[0]));
        let visc = u[2] / v[0] - u[1] * v[1] / (v[0] * v[0]);
        let cond = theta[2] / v[0] - theta[1] * v[1] / (v[0] * v[0]);
        [
            v[3] - u[1],
            u[3] + p_x - self.mu * visc,
            self.cv * theta[3] + p * u[1] - self.kappa * cond - self.mu * u[1] * u[1] / v[0],
        ]
    }
}

/// Sup of `|a - b|` over common entries.
pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
