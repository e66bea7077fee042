use std::io::Write;

use super::grid::Grid;
use super::scheme::{stable_dt, Stepper};
use super::state::FlowState;
use crate::diagnostics::{PerturbationReport, ReportTracker};
use crate::euler_riemann::GasModel;
use crate::wave_profiles::{CompositeProfile, Profile};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSettings {
    pub t_final: f64,
    /// Time between reports.
    pub cadence: f64,
    pub safety: f64,
    /// Exponent of the heat-kernel weight in the weighted norm.
    pub alpha: f64,
}

impl RunSettings {
    fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::domain(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if !(self.cadence > 0.0) {
            return Err(Error::domain(format!(
                "snapshot cadence must be positive, got {}",
                self.cadence
            )));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::domain(format!(
                "weight exponent must be positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Receives every report as it is produced.
pub trait SnapshotSink {
    fn report(&mut self, report: &PerturbationReport) -> Result<()>;

    /// Called with the full state alongside each report.
    fn fields(&mut self, _grid: &Grid, _state: &FlowState, _profile: &dyn Profile) -> Result<()> {
        Ok(())
    }
}

/// Sink that only collects reports.
#[derive(Debug, Default)]
pub struct VecSink(pub Vec<PerturbationReport>);

impl SnapshotSink for VecSink {
    fn report(&mut self, report: &PerturbationReport) -> Result<()> {
        self.0.push(report.clone());
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub t: f64,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub reports: Vec<PerturbationReport>,
    pub final_state: FlowState,
    pub steps: usize,
    /// Set when a step failed; the run stops at that time.
    pub failure: Option<RunFailure>,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Integrates from `initial` to `settings.t_final`, reporting at `t = 0` and
/// every `cadence` after. A failed step ends the run early and is recorded
/// in the outcome; only sink and setup errors are returned as `Err`.
pub fn run(
    gas: &GasModel,
    profile: &dyn Profile,
    composite: Option<&CompositeProfile>,
    initial: FlowState,
    grid: &Grid,
    settings: &RunSettings,
    sink: &mut dyn SnapshotSink,
) -> Result<RunOutcome> {
    settings.validate()?;
    let mut tracker = ReportTracker::new(gas, grid, settings.alpha);
    if let Some(c) = composite {
        tracker = tracker.with_composite(c);
    }
    let mut state = initial;
    let mut reports = Vec::new();
    let mut emit =
        |state: &FlowState, reports: &mut Vec<PerturbationReport>, sink: &mut dyn SnapshotSink| {
            let r = tracker.observe(state, profile)?;
            sink.report(&r)?;
            sink.fields(grid, state, profile)?;
            reports.push(r);
            Ok::<_, Error>(())
        };
    emit(&state, &mut reports, sink)?;

    let mut stepper = Stepper::new(gas, grid, profile);
    let mut steps = 0;
    let mut k = 1u64;
    let mut failure = None;
    'outer: while state.t < settings.t_final {
        let target = (k as f64 * settings.cadence).min(settings.t_final);
        while state.t < target {
            let dt = match stable_dt(gas, grid, &state, settings.safety) {
                Ok(dt) => dt,
                Err(e) => {
                    failure = Some(RunFailure {
                        t: state.t,
                        message: e.to_string(),
                    });
                    break 'outer;
                }
            };
            let remaining = target - state.t;
            let last = dt >= remaining * (1.0 - 1e-12);
            let backup = state.t;
            if let Err(e) = stepper.step(&mut state, if last { remaining } else { dt }) {
                failure = Some(RunFailure {
                    t: backup,
                    message: e.to_string(),
                });
                break 'outer;
            }
            if last {
                state.t = target;
            }
            steps += 1;
        }
        if let Err(e) = emit(&state, &mut reports, sink) {
            if matches!(e, Error::Io(_) | Error::Csv(_)) {
                return Err(e);
            }
            failure = Some(RunFailure {
                t: state.t,
                message: e.to_string(),
            });
            break;
        }
        k += 1;
    }
    Ok(RunOutcome {
        reports,
        final_state: state,
        steps,
        failure,
    })
}

/// Writes `x, v, u, theta, V, U, Theta` for every node.
pub fn write_fields_csv<W: Write>(
    writer: W,
    grid: &Grid,
    state: &FlowState,
    profile: &dyn Profile,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "v", "u", "theta", "V", "U", "Theta"])?;
    for (i, x) in grid.nodes().enumerate() {
        let s = profile.sample(x, state.t);
        w.write_record(
            [x, state.v[i], state.u[i], state.theta[i], s.v, s.u, s.theta].map(|f| f.to_string()),
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler_riemann::EndState;
    use crate::wave_profiles::ConstantProfile;

    #[test]
    fn constant_run_stays_unperturbed() {
        let gas = GasModel::new(1.4, 1.0, 1.0, 1.0, 1.0).unwrap();
        let grid = Grid::new(-10.0, 10.0, 101).unwrap();
        let profile = ConstantProfile(EndState::new(1.2, 0.3, 0.8).unwrap());
        let initial = FlowState::from_profile(&profile, &grid, 0.0);
        let settings = RunSettings {
            t_final: 2.0,
            cadence: 0.5,
            safety: 0.4,
            alpha: 0.1,
        };
        let mut sink = VecSink::default();
        let out = run(&gas, &profile, None, initial, &grid, &settings, &mut sink).unwrap();
        assert!(out.completed());
        assert_eq!(out.reports.len(), 5);
        assert_eq!(sink.0, out.reports);
        assert_eq!(out.reports.last().unwrap().t, 2.0);
        for r in &out.reports {
            assert!(r.sup_total < 1e-14 && r.energy < 1e-26);
        }
    }

    #[test]
    fn failure_time_is_recorded() {
        let gas = GasModel::new(1.4, 1.0, 1.0, 1.0, 1.0).unwrap();
        let grid = Grid::new(-10.0, 10.0, 101).unwrap();
        let profile = ConstantProfile(EndState::new(1.0, 0.0, 1.0).unwrap());
        let mut initial = FlowState::from_profile(&profile, &grid, 0.0);
        initial.v[50] = 1e-6;
        initial.u[49] = 40.0;
        initial.u[51] = -40.0;
        let settings = RunSettings {
            t_final: 1.0,
            cadence: 0.25,
            safety: 1.0,
            alpha: 0.1,
        };
        let out = run(
            &gas,
            &profile,
            None,
            initial,
            &grid,
            &settings,
            &mut VecSink::default(),
        )
        .unwrap();
        let failure = out.failure.expect("run should fail");
        assert!(failure.t < 1.0);
    }
}
