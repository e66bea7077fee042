use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::diagnostics::{norms, ComponentNorms};
use crate::wave_profiles::Profile;
use crate::{Error, Result};

/// Nodal values of `(v, u, theta)` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FlowState {
    /// Samples of `profile` at the grid nodes.
    pub fn from_profile(profile: &dyn Profile, grid: &Grid, t: f64) -> Self {
        let n = grid.len();
        let mut state = Self {
            t,
            v: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
        };
        for x in grid.nodes() {
            let s = profile.sample(x, t);
            state.v.push(s.v);
            state.u.push(s.u);
            state.theta.push(s.theta);
        }
        state
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// First node with non-positive or non-finite `v` or `theta`.
    pub fn check_positive(&self) -> Result<()> {
        for i in 0..self.len() {
            for (field, value) in [("v", self.v[i]), ("theta", self.theta[i])] {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::Positivity {
                        node: i,
                        t: self.t,
                        field,
                        value,
                    });
                }
            }
            if !self.u[i].is_finite() {
                return Err(Error::numeric(format!("u is not finite at node {i}"), None));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PerturbationShape {
    /// `exp(-(x - x_c)^2 / sigma^2)`
    GaussianBump,
    /// Gaussian envelope times a seeded random trigonometric sum with `modes`
    /// harmonics; each component gets its own draw.
    RandomFourier { modes: usize, seed: u64 },
}

/// Initial perturbation added on top of the profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub shape: PerturbationShape,
    pub a_v: f64,
    pub a_u: f64,
    pub a_theta: f64,
    pub sigma: f64,
    pub center: f64,
    /// Lower bound imposed on the initial `v` and `theta`.
    pub floor: f64,
}

impl PerturbationSpec {
    pub fn none() -> Self {
        Self {
            shape: PerturbationShape::GaussianBump,
            a_v: 0.0,
            a_u: 0.0,
            a_theta: 0.0,
            sigma: 1.0,
            center: 0.0,
            floor: 1e-3,
        }
    }

    pub fn gaussian(a_v: f64, a_u: f64, a_theta: f64, sigma: f64, center: f64) -> Self {
        Self {
            a_v,
            a_u,
            a_theta,
            sigma,
            center,
            ..Self::none()
        }
    }

    /// Unit-amplitude shapes of the three components at the grid nodes.
    pub fn shapes(&self, grid: &Grid) -> [Vec<f64>; 3] {
        let envelope = |x: f64| {
            let z = (x - self.center) / self.sigma;
            (-z * z).exp()
        };
        match self.shape {
            PerturbationShape::GaussianBump => {
                let f: Vec<f64> = grid.nodes().map(envelope).collect();
                [f.clone(), f.clone(), f]
            }
            PerturbationShape::RandomFourier { modes, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let modes = modes.max(1);
                let mut draw = || -> Vec<(f64, f64)> {
                    (0..modes)
                        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                };
                let coefficients = [draw(), draw(), draw()];
                coefficients.map(|c| {
                    grid.nodes()
                        .map(|x| {
                            let z = (x - self.center) / self.sigma;
                            let sum: f64 = c
                                .iter()
                                .enumerate()
                                .map(|(k, (a, b))| {
                                    let kz = (k + 1) as f64 * z;
                                    a * kz.cos() + b * kz.sin()
                                })
                                .sum();
                            envelope(x) * sum / modes as f64
                        })
                        .collect()
                })
            }
        }
    }

    pub fn amplitudes(&self) -> [f64; 3] {
        [self.a_v, self.a_u, self.a_theta]
    }

    /// Copy with all amplitudes multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            a_v: self.a_v * factor,
            a_u: self.a_u * factor,
            a_theta: self.a_theta * factor,
            ..*self
        }
    }

    /// Combined discrete H1 norm of the perturbation this spec produces.
    pub fn h1_norm(&self, grid: &Grid) -> f64 {
        let shapes = self.shapes(grid);
        let amps = self.amplitudes();
        let mut total = 0.0;
        for c in 0..3 {
            let field: Vec<f64> = shapes[c].iter().map(|f| amps[c] * f).collect();
            total += norms(&field, grid).h1.powi(2);
        }
        total.sqrt()
    }

    /// Rescales the amplitudes so the combined H1 norm equals `target`.
    pub fn with_h1_norm(&self, target: f64, grid: &Grid) -> Result<Self> {
        let current = self.h1_norm(grid);
        if !(current > 0.0) {
            return Err(Error::domain("cannot rescale a zero perturbation"));
        }
        Ok(self.scaled(target / current))
    }
}

/// Initial state and the measured size of the applied perturbation.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub state: FlowState,
    pub norms: [ComponentNorms; 3],
    pub h1_norm: f64,
}

/// Profile samples at `t = 0` plus the perturbation of `spec`. The end nodes
/// carry the exact profile values.
pub fn init_state(
    profile: &dyn Profile,
    spec: &PerturbationSpec,
    grid: &Grid,
) -> Result<InitialData> {
    if !(spec.sigma > 0.0) {
        return Err(Error::domain(format!(
            "perturbation width must be positive, got {}",
            spec.sigma
        )));
    }
    let mut state = FlowState::from_profile(profile, grid, 0.0);
    let shapes = spec.shapes(grid);
    let amps = spec.amplitudes();
    let n = grid.len();
    for c in 0..3 {
        let edge = (amps[c] * shapes[c][0])
            .abs()
            .max((amps[c] * shapes[c][n - 1]).abs());
        if edge > 1e-12 {
            return Err(Error::domain(format!(
                "perturbation is {edge:.3e} at the domain ends; it must decay below 1e-12"
            )));
        }
    }
    let mut fields = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for i in 1..n - 1 {
        for c in 0..3 {
            fields[c][i] = amps[c] * shapes[c][i];
        }
        state.v[i] += fields[0][i];
        state.u[i] += fields[1][i];
        state.theta[i] += fields[2][i];
    }
    for i in 0..n {
        for (field, value) in [("v", state.v[i]), ("theta", state.theta[i])] {
            if !(value >= spec.floor) {
                return Err(Error::Positivity {
                    node: i,
                    t: 0.0,
                    field,
                    value,
                });
            }
        }
    }
    let component_norms = [
        norms(&fields[0], grid),
        norms(&fields[1], grid),
        norms(&fields[2], grid),
    ];
    let h1_norm = component_norms
        .iter()
        .map(|c| c.h1 * c.h1)
        .sum::<f64>()
        .sqrt();
    Ok(InitialData {
        state,
        norms: component_norms,
        h1_norm,
    })
}
