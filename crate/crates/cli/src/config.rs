//! Run configuration: a TOML document with flat sections.
//!
//! ```toml
//! scenario = "contact"
//!
//! [gas]
//! gamma = 1.6666666666666667
//! r = 1.0
//!
//! [states]
//! theta_minus = 1.0
//! theta_plus = 1.1
//!
//! [run]
//! t_final = 200.0
//! ```
//!
//! Every omitted key takes the default documented on its field, and the
//! resolved document is echoed into the run summary.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use contact_lab::euler_riemann::{
    check_pattern_membership, solve_wave_decomposition, EndState, GasModel, WaveDecomposition,
    DEFAULT_TOL,
};
use contact_lab::ns_solver::{Grid, PerturbationShape, PerturbationSpec};
use contact_lab::wave_profiles::{DEFAULT_HALF_WIDTH, DEFAULT_NODES};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Contact,
    Composite,
    ProfileCheck,
    BurgersCheck,
}

impl Scenario {
    /// Whether the scenario integrates the Navier-Stokes system.
    pub fn is_run(self) -> bool {
        matches!(self, Scenario::Contact | Scenario::Composite)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Seed for random perturbation shapes. Default 0.
    #[serde(default)]
    pub seed: u64,
    /// Output directory. Default `output`.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub gas: GasConfig,
    #[serde(default)]
    pub states: StatesConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub perturbation: PerturbationConfig,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub burgers: BurgersConfig,
}

fn default_output() -> PathBuf {
    PathBuf::from("output")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasConfig {
    pub gamma: f64,
    pub r: f64,
    /// Entropy constant. Default 1.
    #[serde(default = "one")]
    pub a: f64,
    /// Viscosity. Default 1.
    #[serde(default = "one")]
    pub mu: f64,
    /// Heat conductivity. Default 1.
    #[serde(default = "one")]
    pub kappa: f64,
}

fn one() -> f64 {
    1.0
}

/// End states. A contact may be given by `theta_minus`, `theta_plus` and
/// `pressure` alone. Full far-field states use `v_*`, `u_*`, `theta_*`. A
/// composite pattern may instead be built from its left intermediate state
/// (`v_mid`, `theta_mid`, `u_mid`) and the three strengths.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_plus: Option<f64>,
    /// Contact pressure when only temperatures are given. Default 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_mid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_mid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_mid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_r3: Option<f64>,
}

/// Defaults: `[-100, 100]` with 4001 nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x_min: -100.0,
            x_max: 100.0,
            nodes: 4001,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Gaussian,
    RandomFourier,
}

/// Defaults: Gaussian bump of unit width at the origin with zero
/// amplitudes, Fourier shapes use 8 modes, pointwise floor `1e-3`.
/// When `h1_norm` is set the amplitudes are rescaled to that norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbationConfig {
    pub shape: ShapeKind,
    pub a_v: f64,
    pub a_u: f64,
    pub a_theta: f64,
    pub sigma: f64,
    pub center: f64,
    pub modes: usize,
    pub floor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_norm: Option<f64>,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            shape: ShapeKind::Gaussian,
            a_v: 0.0,
            a_u: 0.0,
            a_theta: 0.0,
            sigma: 1.0,
            center: 0.0,
            modes: 8,
            floor: 1e-3,
            h1_norm: None,
        }
    }
}

/// Time controls. `t_final` is required for the run scenarios. Defaults:
/// cadence 0.5, safety 0.4, weight exponent a quarter of the fitted
/// Gaussian-tail constant, no field dumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    pub cadence: f64,
    pub safety: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Write `fields.csv` with the final state.
    pub fields: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            t_final: None,
            cadence: 0.5,
            safety: 0.4,
            alpha: None,
            fields: false,
        }
    }
}

/// Resolution of the self-similar boundary-value problem. Defaults: half
/// width 12, 2401 nodes, tolerance `1e-10`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    pub half_width: f64,
    pub nodes: usize,
    pub tol: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_HALF_WIDTH,
            nodes: DEFAULT_NODES,
            tol: 1e-10,
        }
    }
}

/// Burgers data for the burgers-check scenario. Defaults: `(-1, 1)` sampled
/// with 2001 points per window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BurgersConfig {
    pub w_l: f64,
    pub w_r: f64,
    pub nodes: usize,
}

impl Default for BurgersConfig {
    fn default() -> Self {
        Self {
            w_l: -1.0,
            w_r: 1.0,
            nodes: 2001,
        }
    }
}

/// Parsed TOML document before validation, so overrides can be applied.
pub fn parse_document(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| anyhow!("invalid config: {}", one_line(e.message())))
}

/// Applies `key=value` where `key` is dotted (`gas.gamma`). The value is read
/// as a TOML literal, falling back to a bare string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("override `{assignment}` is not of the form key=value"))?;
    let value = parse_value(raw.trim());
    let path: Vec<&str> = key.trim().split('.').collect();
    let (last, parents) = path.split_last().expect("split yields at least one item");
    let mut table = doc;
    for part in parents {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| anyhow!("override `{key}`: `{part}` is not a section"))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("value = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("value"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn one_line(message: &str) -> String {
    message.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Validates an already-parsed document.
pub fn from_document(doc: toml::Table) -> Result<RunConfig> {
    let config: RunConfig = doc
        .try_into()
        .map_err(|e: toml::de::Error| anyhow!("invalid config: {}", one_line(e.message())))?;
    config.validate()?;
    Ok(config)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    from_document(parse_document(text)?)
}

pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc = parse_document(text)?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    from_document(doc)
}

/// Far-field data resolved for a scenario.
#[derive(Clone, Debug)]
pub enum Resolved {
    Contact { left: EndState, right: EndState },
    Composite(WaveDecomposition),
    Burgers,
}

fn positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        bail!("{name} must be positive, got {value}");
    }
    Ok(())
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn gas_model(&self) -> Result<GasModel> {
        let g = &self.gas;
        Ok(GasModel::new(g.gamma, g.r, g.a, g.mu, g.kappa)?)
    }

    pub fn grid(&self) -> Result<Grid> {
        Ok(Grid::new(
            self.grid.x_min,
            self.grid.x_max,
            self.grid.nodes,
        )?)
    }

    pub fn t_final(&self) -> Result<f64> {
        self.run.t_final.ok_or_else(|| {
            anyhow!(
                "missing required key `run.t_final` for the {:?} scenario",
                self.scenario
            )
        })
    }

    /// Perturbation before any rescaling to a target norm.
    pub fn perturbation_spec(&self) -> PerturbationSpec {
        let p = &self.perturbation;
        let shape = match p.shape {
            ShapeKind::Gaussian => PerturbationShape::GaussianBump,
            ShapeKind::RandomFourier => PerturbationShape::RandomFourier {
                modes: p.modes,
                seed: self.seed,
            },
        };
        PerturbationSpec {
            shape,
            a_v: p.a_v,
            a_u: p.a_u,
            a_theta: p.a_theta,
            sigma: p.sigma,
            center: p.center,
            floor: p.floor,
        }
    }

    fn validate(&self) -> Result<()> {
        self.gas_model()?;
        if self.scenario.is_run() {
            self.grid()?;
            positive("run.t_final", self.t_final()?)?;
            positive("run.cadence", self.run.cadence)?;
            if !(self.run.safety > 0.0 && self.run.safety <= 1.0) {
                bail!("run.safety must lie in (0, 1], got {}", self.run.safety);
            }
            if let Some(alpha) = self.run.alpha {
                positive("run.alpha", alpha)?;
            }
            let p = &self.perturbation;
            positive("perturbation.sigma", p.sigma)?;
            if let Some(norm) = p.h1_norm {
                if !(norm.is_finite() && norm >= 0.0) {
                    bail!("perturbation.h1_norm must be non-negative, got {norm}");
                }
            }
            if p.shape == ShapeKind::RandomFourier && p.modes == 0 {
                bail!("perturbation.modes must be at least 1");
            }
        }
        positive("profile.half_width", self.profile.half_width)?;
        positive("profile.tol", self.profile.tol)?;
        if self.profile.nodes < 3 {
            bail!(
                "profile.nodes must be at least 3, got {}",
                self.profile.nodes
            );
        }
        if self.scenario == Scenario::BurgersCheck {
            if self.burgers.w_l >= self.burgers.w_r
                || self.burgers.w_l.is_nan()
                || self.burgers.w_r.is_nan()
            {
                bail!(
                    "burgers check requires w_l < w_r, got {} and {}",
                    self.burgers.w_l,
                    self.burgers.w_r
                );
            }
            if self.burgers.nodes < 3 {
                bail!("burgers.nodes must be at least 3");
            }
        }
        self.resolve()?;
        Ok(())
    }

    fn full_states(&self) -> Option<Result<(EndState, EndState)>> {
        let s = &self.states;
        let parts = [
            s.v_minus,
            s.u_minus,
            s.theta_minus,
            s.v_plus,
            s.u_plus,
            s.theta_plus,
        ];
        if s.v_minus.is_none() && s.v_plus.is_none() {
            return None;
        }
        let names = [
            "v_minus",
            "u_minus",
            "theta_minus",
            "v_plus",
            "u_plus",
            "theta_plus",
        ];
        for (value, name) in parts.iter().zip(names) {
            if value.is_none() {
                return Some(Err(anyhow!("missing required key `states.{name}`")));
            }
        }
        let [vl, ul, tl, vr, ur, tr] = parts.map(Option::unwrap);
        Some(
            EndState::new(vl, ul, tl)
                .and_then(|l| EndState::new(vr, ur, tr).map(|r| (l, r)))
                .map_err(anyhow::Error::from),
        )
    }

    fn require(value: Option<f64>, name: &str) -> Result<f64> {
        value.ok_or_else(|| anyhow!("missing required key `states.{name}`"))
    }

    /// End states of the scenario, checked for admissibility.
    pub fn resolve(&self) -> Result<Resolved> {
        let gas = self.gas_model()?;
        let s = &self.states;
        match self.scenario {
            Scenario::Contact | Scenario::ProfileCheck => {
                let (left, right) = match self.full_states() {
                    Some(states) => states?,
                    None => {
                        let tl = Self::require(s.theta_minus, "theta_minus")?;
                        let tr = Self::require(s.theta_plus, "theta_plus")?;
                        let p = s.pressure.unwrap_or(1.0);
                        positive("states.pressure", p)?;
                        let u = s.u_minus.unwrap_or(0.0);
                        let left = EndState::new(gas.r() * tl / p, u, tl)?;
                        let right = EndState::new(gas.r() * tr / p, u, tr)?;
                        (left, right)
                    }
                };
                let (pl, pr) = (left.pressure(&gas), right.pressure(&gas));
                if left.u != right.u || (pl - pr).abs() > 1e-10 * pl.max(pr) {
                    bail!("contact scenario requires u_- = u_+ and p_- = p_+ (got u {} and {}, p {pl} and {pr})", left.u, right.u);
                }
                Ok(Resolved::Contact { left, right })
            }
            Scenario::Composite => {
                if let Some(states) = self.full_states() {
                    let (left, right) = states?;
                    let membership = check_pattern_membership(&gas, &left, &right)?;
                    if !membership.holds() {
                        return Err(contact_lab::Error::PatternMismatch(format!(
                            "right state lies outside the rarefaction-contact-rarefaction region (margins {:.3e}, {:.3e})",
                            membership.one_wave_margin, membership.three_wave_margin
                        ))
                        .into());
                    }
                    let dec = solve_wave_decomposition(&gas, &left, &right, DEFAULT_TOL)
                        .context("solving the wave decomposition")?;
                    return Ok(Resolved::Composite(dec));
                }
                let v = Self::require(s.v_mid, "v_mid")?;
                let th = Self::require(s.theta_mid, "theta_mid")?;
                let d1 = Self::require(s.delta_r1, "delta_r1")?;
                let dcd = Self::require(s.delta_cd, "delta_cd")?;
                let d3 = Self::require(s.delta_r3, "delta_r3")?;
                Ok(Resolved::Composite(WaveDecomposition::compose(
                    &gas,
                    v,
                    th,
                    s.u_mid.unwrap_or(0.0),
                    d1,
                    dcd,
                    d3,
                )?))
            }
            Scenario::BurgersCheck => Ok(Resolved::Burgers),
        }
    }
}
