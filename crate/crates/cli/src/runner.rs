use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use contact_lab::checks::{
    burgers_check, profile_check, source_check, BurgersCheck, ProfileCheck, SourceCheck,
};
use contact_lab::diagnostics::{ComponentNorms, PerturbationReport, TimeseriesWriter};
use contact_lab::euler_riemann::GasModel;
use contact_lab::ns_solver::{
    init_state, run, write_fields_csv, FlowState, Grid, RunSettings, SnapshotSink,
};
use contact_lab::wave_profiles::{BurgersWave, CompositeProfile, ContactWave, Profile};
use serde::Serialize;

use crate::config::{Resolved, RunConfig};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const LOG_FILE: &str = "run.log";
pub const FIELDS_FILE: &str = "fields.csv";

#[derive(Clone, Debug, Serialize)]
pub struct WaveInfo {
    pub delta_r1: f64,
    pub delta_cd: f64,
    pub delta_r3: f64,
    pub comparability_ratio: f64,
    pub v_minus_m: f64,
    pub theta_minus_m: f64,
    pub v_plus_m: f64,
    pub theta_plus_m: f64,
    pub u_m: f64,
    pub p_m: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormSnapshot {
    pub t: f64,
    pub l2: f64,
    pub h1: f64,
    pub sup: f64,
    pub energy: f64,
}

impl NormSnapshot {
    fn of(r: &PerturbationReport) -> Self {
        Self {
            t: r.t,
            l2: r.l2_total,
            h1: r.h1_total,
            sup: r.sup_total,
            energy: r.energy,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub completed: bool,
    pub positivity_held: bool,
    pub cell_bounds_held: bool,
    /// Composite runs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1_nonnegative: Option<bool>,
    /// Energy never exceeded 1.5 times its largest value over `t <= 1`.
    pub energy_bounded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunResults {
    pub steps: usize,
    pub alpha: f64,
    pub initial_h1_norm: f64,
    pub initial_norms: [ComponentNorms; 3],
    /// Largest value of each norm over the snapshots, with the time of the
    /// sup-norm peak.
    pub peak: NormSnapshot,
    pub final_norms: NormSnapshot,
    /// `sup_final / sup_peak`
    pub decay_ratio: f64,
    pub cum_dissipation: f64,
    pub flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Checks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sources: Option<SourceCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub burgers: Vec<BurgersCheck>,
}

impl Checks {
    /// Verdict of each check that was evaluated, in a fixed order.
    pub fn verdicts(&self) -> Vec<(&'static str, bool)> {
        let mut out = Vec::new();
        if let Some(p) = &self.profile {
            out.push(("profile", p.passed()));
        }
        if let Some(s) = &self.sources {
            out.push(("sources", s.passed()));
        }
        for b in &self.burgers {
            out.push(("burgers", b.passed()));
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|(_, ok)| *ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub version: &'static str,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waves: Option<WaveInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunResults>,
    pub checks: Checks,
    pub checks_passed: bool,
}

struct FileSink {
    timeseries: TimeseriesWriter<BufWriter<File>>,
    log: BufWriter<File>,
}

impl SnapshotSink for FileSink {
    fn report(&mut self, r: &PerturbationReport) -> contact_lab::Result<()> {
        self.timeseries.write(r)?;
        writeln!(
            self.log,
            "t = {:.3}  sup = {:.6e}  h1 = {:.6e}  energy = {:.6e}  cells ok = {}",
            r.t, r.sup_total, r.h1_total, r.energy, r.cell_avg_ok
        )?;
        Ok(())
    }
}

fn wave_info(c: &CompositeProfile) -> WaveInfo {
    let d = &c.decomposition;
    WaveInfo {
        delta_r1: d.delta_r1,
        delta_cd: d.delta_cd,
        delta_r3: d.delta_r3,
        comparability_ratio: d.comparability_ratio(),
        v_minus_m: d.v_minus_m,
        theta_minus_m: d.theta_minus_m,
        v_plus_m: d.v_plus_m,
        theta_plus_m: d.theta_plus_m,
        u_m: d.u_m,
        p_m: d.p_m,
    }
}

enum Waves {
    Contact(ContactWave),
    Composite(Box<CompositeProfile>),
    Burgers(BurgersWave),
}

fn build(config: &RunConfig, gas: &GasModel) -> Result<Waves> {
    let p = &config.profile;
    Ok(match config.resolve()? {
        Resolved::Contact { left, right } => {
            let mut wave = ContactWave::with_grid(
                gas,
                left.theta,
                right.theta,
                right.pressure(gas),
                p.half_width,
                p.nodes,
                p.tol,
            )?;
            wave.u_base = left.u;
            Waves::Contact(wave)
        }
        Resolved::Composite(dec) => Waves::Composite(Box::new(CompositeProfile::with_grid(
            gas,
            &dec,
            p.half_width,
            p.nodes,
            p.tol,
        )?)),
        Resolved::Burgers => {
            Waves::Burgers(BurgersWave::new(config.burgers.w_l, config.burgers.w_r)?)
        }
    })
}

fn evaluate_checks(config: &RunConfig, waves: &Waves) -> Checks {
    match waves {
        Waves::Contact(w) => Checks {
            profile: Some(profile_check(w)),
            ..Checks::default()
        },
        Waves::Composite(c) => Checks {
            profile: Some(profile_check(&c.contact)),
            sources: Some(source_check(c)),
            burgers: vec![
                burgers_check(&c.rare1.burgers, config.burgers.nodes),
                burgers_check(&c.rare3.burgers, config.burgers.nodes),
            ],
        },
        Waves::Burgers(b) => Checks {
            burgers: vec![burgers_check(b, config.burgers.nodes)],
            ..Checks::default()
        },
    }
}

/// Evaluates the property checks of a configuration without time stepping.
pub fn check_profiles(config: &RunConfig) -> Result<Summary> {
    let gas = config.gas_model()?;
    let waves = build(config, &gas)?;
    let checks = evaluate_checks(config, &waves);
    let waves_info = match &waves {
        Waves::Composite(c) => Some(wave_info(c)),
        _ => None,
    };
    let summary = Summary {
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        waves: waves_info,
        run: None,
        checks_passed: checks.passed(),
        checks,
    };
    fs::create_dir_all(&config.output)
        .with_context(|| format!("creating {}", config.output.display()))?;
    write_summary(&config.output, &summary)?;
    Ok(summary)
}

fn write_summary(dir: &Path, summary: &Summary) -> Result<()> {
    let path = dir.join(SUMMARY_FILE);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, summary)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fold_results(
    outcome_reports: &[PerturbationReport],
    composite: bool,
) -> (NormSnapshot, NormSnapshot, f64, Flags) {
    let first = &outcome_reports[0];
    let last = outcome_reports.last().unwrap_or(first);
    let mut peak = NormSnapshot::of(first);
    for r in outcome_reports {
        if r.sup_total > peak.sup {
            peak.sup = r.sup_total;
            peak.t = r.t;
        }
        peak.l2 = peak.l2.max(r.l2_total);
        peak.h1 = peak.h1.max(r.h1_total);
        peak.energy = peak.energy.max(r.energy);
    }
    let early = outcome_reports
        .iter()
        .filter(|r| r.t <= 1.0)
        .map(|r| r.energy)
        .fold(0.0, f64::max);
    let flags = Flags {
        completed: true,
        positivity_held: outcome_reports
            .iter()
            .all(|r| r.v_min > 0.0 && r.theta_min > 0.0),
        cell_bounds_held: outcome_reports.iter().all(|r| r.cell_avg_ok),
        q1_nonnegative: composite.then(|| {
            outcome_reports
                .iter()
                .all(|r| r.q1.is_some_and(|q| q >= 0.0))
        }),
        energy_bounded: peak.energy <= 1.5 * early,
    };
    let decay = if peak.sup > 0.0 {
        last.sup_total / peak.sup
    } else {
        0.0
    };
    (peak, NormSnapshot::of(last), decay, flags)
}

/// Runs one configuration and writes its artifacts into `config.output`.
/// A run that stops early still writes every artifact before the error is
/// returned.
pub fn run_scenario(config: &RunConfig) -> Result<Summary> {
    if !config.scenario.is_run() {
        return check_profiles(config);
    }
    let started = Instant::now();
    let gas = config.gas_model()?;
    let grid = config.grid()?;
    let waves = build(config, &gas)?;
    let (profile, composite): (&dyn Profile, Option<&CompositeProfile>) = match &waves {
        Waves::Contact(w) => (w, None),
        Waves::Composite(c) => (c.as_ref(), Some(c.as_ref())),
        Waves::Burgers(_) => unreachable!("burgers scenario does not integrate"),
    };
    let c1 = match &waves {
        Waves::Contact(w) => w.profile.c1_fit,
        Waves::Composite(c) => c.contact.profile.c1_fit,
        Waves::Burgers(_) => unreachable!(),
    };
    let alpha = config.run.alpha.unwrap_or(0.25 * c1);
    if !(alpha > 0.0 && alpha.is_finite()) {
        bail!("weight exponent must be positive, got {alpha}; set run.alpha explicitly");
    }

    let mut spec = config.perturbation_spec();
    if let Some(norm) = config.perturbation.h1_norm {
        spec = spec.with_h1_norm(norm, &grid)?;
    }
    let initial = init_state(profile, &spec, &grid)?;

    let dir = &config.output;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let open = |name: &str| -> Result<BufWriter<File>> {
        let path = dir.join(name);
        Ok(BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        ))
    };
    let mut log = open(LOG_FILE)?;
    writeln!(log, "contact-lab {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(log, "scenario {:?}", config.scenario)?;
    writeln!(
        log,
        "grid [{}, {}] with {} nodes, h = {}",
        grid.x_min(),
        grid.x_max(),
        grid.len(),
        grid.h()
    )?;
    writeln!(
        log,
        "initial perturbation H1 norm {:.6e}, weight exponent {alpha:.6}",
        initial.h1_norm
    )?;
    let mut sink = FileSink {
        timeseries: TimeseriesWriter::new(open(TIMESERIES_FILE)?)?,
        log,
    };
    let settings = RunSettings {
        t_final: config.t_final()?,
        cadence: config.run.cadence,
        safety: config.run.safety,
        alpha,
    };
    let initial_norms = initial.norms;
    let initial_h1 = initial.h1_norm;
    let outcome = run(
        &gas,
        profile,
        composite,
        initial.state,
        &grid,
        &settings,
        &mut sink,
    )?;
    sink.timeseries.flush()?;
    if config.run.fields {
        write_fields(dir, &grid, &outcome.final_state, profile)?;
    }

    let (peak, final_norms, decay_ratio, mut flags) =
        fold_results(&outcome.reports, composite.is_some());
    flags.completed = outcome.completed();
    let failure = outcome
        .failure
        .as_ref()
        .map(|f| format!("run stopped at t = {}: {}", f.t, f.message));
    let results = RunResults {
        steps: outcome.steps,
        alpha,
        initial_h1_norm: initial_h1,
        initial_norms,
        cum_dissipation: outcome.reports.last().map_or(0.0, |r| r.cum_dissipation),
        peak,
        final_norms,
        decay_ratio,
        flags,
        failure: failure.clone(),
    };
    let checks = evaluate_checks(config, &waves);
    let summary = Summary {
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        waves: composite.map(wave_info),
        run: Some(results),
        checks_passed: checks.passed(),
        checks,
    };
    write_summary(dir, &summary)?;
    let mut log = sink.log;
    match &failure {
        Some(msg) => writeln!(log, "{msg}")?,
        None => writeln!(
            log,
            "completed {} steps in {:.1} s, decay ratio {:.4}",
            outcome.steps,
            started.elapsed().as_secs_f64(),
            decay_ratio
        )?,
    }
    log.flush()?;
    if let Some(msg) = failure {
        bail!(msg);
    }
    Ok(summary)
}

fn write_fields(dir: &Path, grid: &Grid, state: &FlowState, profile: &dyn Profile) -> Result<()> {
    let path = dir.join(FIELDS_FILE);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_fields_csv(BufWriter::new(file), grid, state, profile)?;
    Ok(())
}

/// Directory name for one sweep member.
pub fn sweep_dir(base: &Path, key: &str, value: &str) -> PathBuf {
    let clean: String = format!("{key}={value}")
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._=-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    base.join(clean)
}
