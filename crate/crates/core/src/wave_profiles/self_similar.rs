use std::io::Write;

use crate::euler_riemann::GasModel;
use crate::fit::fit_line;
use crate::{Error, Result};

pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
pub const DEFAULT_NODES: usize = 2401;
const MAX_NEWTON: usize = 100;
/// Band of `|Theta - theta_+-| / delta` used for the Gaussian tail fit: above
/// the rounding floor, below the transition layer.
const TAIL_BAND: (f64, f64) = (1e-10, 1e-2);

/// Self-similar solution `Theta(xi)`, `xi = x / sqrt(1 + t)`, of
/// `Theta_t = a (Theta_x / Theta)_x` with `Theta(+-inf) = theta_+-`,
/// tabulated on a uniform grid of `[-L, L]`.
///
/// The profile ODE is `a (Theta' / Theta)' + (xi / 2) Theta' = 0`.
#[derive(Clone, Debug)]
pub struct SelfSimilarProfile {
    pub theta_minus: f64,
    pub theta_plus: f64,
    /// Diffusion coefficient `a = kappa p_+ (gamma - 1) / (gamma R^2)`.
    pub a: f64,
    pub half_width: f64,
    pub xi: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_prime: Vec<f64>,
    /// Fitted Gaussian-tail constant: `|Theta - theta_+-| ~ C delta exp(-c1 xi^2)`.
    pub c1_fit: f64,
    /// The `C` of the tail bound, the largest tail ratio over the fitted nodes.
    pub tail_constant: f64,
    /// Max-norm of the discrete ODE residual at interior nodes.
    pub residual: f64,
    /// Hermite slopes after Fritsch-Carlson limiting.
    slopes: Vec<f64>,
    h: f64,
}

impl SelfSimilarProfile {
    /// Solves the two-point problem on `[-L, L]` with `n` nodes by damped
    /// Newton iteration on the centred discretisation.
    pub fn solve(
        gas: &GasModel,
        p_plus: f64,
        theta_minus: f64,
        theta_plus: f64,
        half_width: f64,
        n: usize,
        tol: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("theta_minus", theta_minus),
            ("theta_plus", theta_plus),
            ("p_plus", p_plus),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::domain(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if n < 101 || n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "node count must be odd and at least 101, got {n}"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }

        let a = gas.kappa() * p_plus * (gas.gamma() - 1.0) / (gas.gamma() * gas.r() * gas.r());
        let h = 2.0 * half_width / (n - 1) as f64;
        let xi: Vec<f64> = (0..n).map(|i| -half_width + i as f64 * h).collect();
        let jump = theta_plus - theta_minus;
        let mut theta: Vec<f64> = xi
            .iter()
            .map(|&x| theta_minus + jump * 0.5 * (1.0 + x.tanh()))
            .collect();
        theta[0] = theta_minus;
        theta[n - 1] = theta_plus;

        let mut res = residual(&xi, &theta, a, h);
        let mut norm = max_abs(&res);
        let mut iterations = 0;
        while norm > tol {
            if iterations == MAX_NEWTON {
                return Err(Error::numeric(
                    format!("profile Newton iteration did not converge in {MAX_NEWTON} steps"),
                    Some(norm),
                ));
            }
            iterations += 1;
            let step = newton_step(&xi, &theta, &res, a, h);
            let mut damping = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial: Vec<f64> = theta
                    .iter()
                    .zip(&step)
                    .map(|(t, d)| t + damping * d)
                    .collect();
                if trial.iter().all(|&t| t > 0.0) {
                    let trial_res = residual(&xi, &trial, a, h);
                    let trial_norm = max_abs(&trial_res);
                    if trial_norm < (1.0 - 1e-4 * damping) * norm || trial_norm <= tol {
                        theta = trial;
                        res = trial_res;
                        norm = trial_norm;
                        accepted = true;
                        break;
                    }
                }
                damping *= 0.5;
            }
            if !accepted {
                if theta.iter().any(|&t| t <= 0.0) {
                    return Err(Error::domain("profile iterate lost positivity"));
                }
                return Err(Error::numeric("profile line search stalled", Some(norm)));
            }
        }

        let theta_prime = differentiate(&theta, h);
        let slopes = limit_slopes(&theta, &theta_prime, h);
        let mut profile = Self {
            theta_minus,
            theta_plus,
            a,
            half_width,
            xi,
            theta,
            theta_prime,
            c1_fit: 0.0,
            tail_constant: 0.0,
            residual: norm,
            slopes,
            h,
        };
        profile.fit_tail();
        Ok(profile)
    }

    pub fn strength(&self) -> f64 {
        (self.theta_plus - self.theta_minus).abs()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `(Theta(xi), Theta'(xi))`. Outside `[-L, L]` the far-field constants are
    /// returned with zero slope.
    pub fn eval(&self, xi: f64) -> (f64, f64) {
        let n = self.xi.len();
        if xi <= self.xi[0] {
            return (self.theta_minus, 0.0);
        }
        if xi >= self.xi[n - 1] {
            return (self.theta_plus, 0.0);
        }
        let pos = (xi - self.xi[0]) / self.h;
        let i = (pos.floor() as usize).min(n - 2);
        let s = pos - i as f64;
        let (y0, y1) = (self.theta[i], self.theta[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let slope = (1.0 - s) * self.theta_prime[i] + s * self.theta_prime[i + 1];
        (value, slope)
    }

    /// Number of node pairs breaking strict monotonicity. Ties are tolerated
    /// only where both nodes sit within rounding of a far-field value, since
    /// the tails flatten below machine resolution.
    pub fn monotonicity_violations(&self) -> usize {
        let direction = (self.theta_plus - self.theta_minus).signum();
        let floor = 64.0 * f64::EPSILON * self.theta_minus.max(self.theta_plus);
        let resolved =
            |t: f64| (t - self.theta_minus).abs() > floor && (t - self.theta_plus).abs() > floor;
        self.theta
            .windows(2)
            .filter(|w| {
                let step = (w[1] - w[0]) * direction;
                if direction == 0.0 {
                    w[1] != w[0]
                } else if resolved(w[0]) && resolved(w[1]) {
                    step <= 0.0
                } else {
                    step < 0.0
                }
            })
            .count()
    }

    /// Discrete residual of the profile ODE at every interior node.
    pub fn bvp_residual(&self) -> Vec<f64> {
        residual(&self.xi, &self.theta, self.a, self.h)
    }

    /// Linearised tail decay rate `min(theta_+-) / (4a)`; used when the profile
    /// is constant and nothing can be fitted.
    pub fn linear_tail_rate(&self) -> f64 {
        self.theta_minus.min(self.theta_plus) / (4.0 * self.a)
    }

    fn fit_tail(&mut self) {
        let delta = self.strength();
        self.c1_fit = self.linear_tail_rate();
        self.tail_constant = 0.0;
        if delta == 0.0 {
            return;
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (&xi, &th) in self.xi.iter().zip(&self.theta) {
            let far = if xi < 0.0 {
                self.theta_minus
            } else {
                self.theta_plus
            };
            let rel = (th - far).abs() / delta;
            if rel >= TAIL_BAND.0 && rel <= TAIL_BAND.1 {
                xs.push(xi * xi);
                ys.push(rel.ln());
            }
        }
        if let Some(line) = fit_line(&xs, &ys) {
            self.c1_fit = -line.slope;
            self.tail_constant = xs
                .iter()
                .zip(&ys)
                .map(|(x2, ly)| (ly + self.c1_fit * x2).exp())
                .fold(0.0, f64::max);
        }
    }

    /// Writes `xi,Theta,Theta_prime` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["xi", "Theta", "Theta_prime"])?;
        for i in 0..self.xi.len() {
            out.write_record(&[
                format!("{:.17e}", self.xi[i]),
                format!("{:.17e}", self.theta[i]),
                format!("{:.17e}", self.theta_prime[i]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Residual at interior nodes 1..n-1 (index 0 and n-1 are zero).
fn residual(xi: &[f64], theta: &[f64], a: f64, h: f64) -> Vec<f64> {
    let n = theta.len();
    let mut r = vec![0.0; n];
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;
    for i in 1..n - 1 {
        let (lm, l0, lp) = (theta[i - 1].ln(), theta[i].ln(), theta[i + 1].ln());
        r[i] = a * (lp - 2.0 * l0 + lm) * inv_h2
            + 0.5 * xi[i] * (theta[i + 1] - theta[i - 1]) * inv_2h;
    }
    r
}

fn newton_step(xi: &[f64], theta: &[f64], res: &[f64], a: f64, h: f64) -> Vec<f64> {
    let n = theta.len();
    let m = n - 2;
    let inv_h2 = 1.0 / (h * h);
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        let adv = 0.25 * xi[i] / h;
        lower[k] = a * inv_h2 / theta[i - 1] - adv;
        diag[k] = -2.0 * a * inv_h2 / theta[i];
        upper[k] = a * inv_h2 / theta[i + 1] + adv;
        rhs[k] = -res[i];
    }
    let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs);
    let mut step = vec![0.0; n];
    step[1..n - 1].copy_from_slice(&interior);
    step
}

/// Thomas algorithm. `lower[0]` and `upper[m-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for k in 1..m {
        let denom = diag[k] - lower[k] * c[k - 1];
        c[k] = upper[k] / denom;
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = d[m - 1];
    for k in (0..m - 1).rev() {
        x[k] = d[k] - c[k] * x[k + 1];
    }
    x
}

fn differentiate(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    d
}

/// Fritsch-Carlson limiting of Hermite slopes so the interpolant is monotone
/// on every interval.
fn limit_slopes(values: &[f64], slopes: &[f64], h: f64) -> Vec<f64> {
    let mut m = slopes.to_vec();
    for i in 0..values.len() - 1 {
        let secant = (values[i + 1] - values[i]) / h;
        if secant == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let alpha = m[i] / secant;
        let beta = m[i + 1] / secant;
        if alpha < 0.0 {
            m[i] = 0.0;
        }
        if beta < 0.0 {
            m[i + 1] = 0.0;
        }
        let (alpha, beta) = (m[i] / secant, m[i + 1] / secant);
        let radius = alpha * alpha + beta * beta;
        if radius > 9.0 {
            let tau = 3.0 / radius.sqrt();
            m[i] = tau * alpha * secant;
            m[i + 1] = tau * beta * secant;
        }
    }
    m
}
