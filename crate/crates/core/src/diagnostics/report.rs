use std::io::Write;

use serde::Serialize;

use super::energy::{
    basic_energy, cell_average_check, dissipation, perturbation_fields, rarefaction_dissipation,
    sample_profile, weighted_l2,
};
use super::norms::{derivative, norms, trapezoid};
use crate::euler_riemann::GasModel;
use crate::ns_solver::{FlowState, Grid};
use crate::wave_profiles::{CompositeProfile, Profile};
use crate::Result;

/// Schema version written in the first line of every timeseries file.
pub const TIMESERIES_VERSION: u32 = 1;

/// Diagnostics of one snapshot. Component arrays are ordered `(phi, psi, zeta)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub t: f64,
    pub l2: [f64; 3],
    pub h1: [f64; 3],
    pub sup: [f64; 3],
    pub l2_total: f64,
    pub h1_total: f64,
    pub sup_total: f64,
    pub energy: f64,
    pub dissipation: f64,
    /// `int (phi^2 + psi^2 + zeta^2) w^2 dx`
    pub weighted: f64,
    /// `int (phi_x^2 + psi_x^2 + zeta_x^2) dx`
    pub gradient: f64,
    /// `int phi dx`
    pub mass: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Energy level used for the cell bracket.
    pub c0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub cell_avg_ok: bool,
    pub cell_failures: usize,
    pub cells_skipped: usize,
    /// Rarefaction dissipation integrand total, composite runs only.
    pub q1: Option<f64>,
    pub cum_dissipation: f64,
    pub cum_weighted: f64,
    pub cum_gradient: f64,
    /// `cum_weighted / (1 + cum_gradient)`
    pub weighted_ratio: f64,
}

/// Report for a single snapshot. `c0_floor` is the running maximum of the
/// energy before this snapshot; the bracket uses the larger of it and the
/// current energy. Cumulative fields are left at zero.
pub fn snapshot(
    gas: &GasModel,
    grid: &Grid,
    state: &FlowState,
    profile: &dyn Profile,
    composite: Option<&CompositeProfile>,
    alpha: f64,
    c0_floor: f64,
) -> Result<PerturbationReport> {
    let samples = sample_profile(profile, grid, state.t);
    let fields = perturbation_fields(state, &samples);
    let comps = fields.components();
    let n = comps.map(|f| norms(f, grid));
    let h = grid.h();
    let mut weighted = 0.0;
    let mut gradient = 0.0;
    for f in comps {
        weighted += weighted_l2(f, grid, state.t, alpha)?;
        let d: Vec<f64> = derivative(f, h).iter().map(|x| x * x).collect();
        gradient += trapezoid(&d, h);
    }
    let energy = basic_energy(gas, state, &samples, grid)?;
    let c0 = c0_floor.max(energy).max(f64::MIN_POSITIVE);
    let cells = cell_average_check(state, &samples, grid, c0)?;
    let q1 = match composite {
        Some(c) => Some(rarefaction_dissipation(gas, state, &samples, c, grid)?),
        None => None,
    };
    let min = |xs: &[f64]| xs.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let max = |xs: &[f64]| xs.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
    Ok(PerturbationReport {
        t: state.t,
        l2: n.map(|c| c.l2),
        h1: n.map(|c| c.h1),
        sup: n.map(|c| c.sup),
        l2_total: n.iter().map(|c| c.l2 * c.l2).sum::<f64>().sqrt(),
        h1_total: n.iter().map(|c| c.h1 * c.h1).sum::<f64>().sqrt(),
        sup_total: n.iter().fold(0.0_f64, |m, c| m.max(c.sup)),
        energy,
        dissipation: dissipation(state, &samples, grid)?,
        weighted,
        gradient,
        mass: trapezoid(&fields.phi, h),
        v_min: min(&state.v),
        v_max: max(&state.v),
        theta_min: min(&state.theta),
        theta_max: max(&state.theta),
        c0,
        alpha1: cells.alpha1,
        alpha2: cells.alpha2,
        cell_avg_ok: cells.all_passed(),
        cell_failures: cells.failures(),
        cells_skipped: cells.skipped,
        q1,
        cum_dissipation: 0.0,
        cum_weighted: 0.0,
        cum_gradient: 0.0,
        weighted_ratio: 0.0,
    })
}

/// Builds successive reports of one run, carrying the running-max energy and
/// the trapezoid-in-time integrals of the dissipation, weighted norm and
/// gradient norm.
pub struct ReportTracker<'a> {
    gas: GasModel,
    grid: Grid,
    alpha: f64,
    composite: Option<&'a CompositeProfile>,
    previous: Option<PerturbationReport>,
}

impl<'a> ReportTracker<'a> {
    pub fn new(gas: &GasModel, grid: &Grid, alpha: f64) -> Self {
        Self {
            gas: *gas,
            grid: *grid,
            alpha,
            composite: None,
            previous: None,
        }
    }

    pub fn with_composite(mut self, composite: &'a CompositeProfile) -> Self {
        self.composite = Some(composite);
        self
    }

    pub fn observe(
        &mut self,
        state: &FlowState,
        profile: &dyn Profile,
    ) -> Result<PerturbationReport> {
        let floor = self.previous.as_ref().map_or(0.0, |p| p.c0);
        let mut report = snapshot(
            &self.gas,
            &self.grid,
            state,
            profile,
            self.composite,
            self.alpha,
            floor,
        )?;
        if let Some(prev) = &self.previous {
            let dt = report.t - prev.t;
            report.cum_dissipation =
                prev.cum_dissipation + 0.5 * dt * (prev.dissipation + report.dissipation);
            report.cum_weighted = prev.cum_weighted + 0.5 * dt * (prev.weighted + report.weighted);
            report.cum_gradient = prev.cum_gradient + 0.5 * dt * (prev.gradient + report.gradient);
        }
        report.weighted_ratio = report.cum_weighted / (1.0 + report.cum_gradient);
        self.previous = Some(report.clone());
        Ok(report)
    }
}

const COLUMNS: [&str; 33] = [
    "t",
    "l2_phi",
    "l2_psi",
    "l2_zeta",
    "h1_phi",
    "h1_psi",
    "h1_zeta",
    "sup_phi",
    "sup_psi",
    "sup_zeta",
    "l2",
    "h1",
    "sup",
    "energy",
    "dissipation",
    "weighted",
    "gradient",
    "mass",
    "v_min",
    "v_max",
    "theta_min",
    "theta_max",
    "c0",
    "alpha1",
    "alpha2",
    "cell_avg_ok",
    "cell_failures",
    "cells_skipped",
    "q1",
    "cum_dissipation",
    "cum_weighted",
    "cum_gradient",
    "weighted_ratio",
];

/// CSV writer for report rows. The first line is a `#` comment carrying the
/// schema version, followed by the column header.
pub struct TimeseriesWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> TimeseriesWriter<W> {
    pub fn new(mut writer: W) -> Result<Self> {
        writeln!(writer, "# contact-lab timeseries v{TIMESERIES_VERSION}")?;
        let mut inner = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        inner.write_record(COLUMNS)?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &PerturbationReport) -> Result<()> {
        let mut row: Vec<String> = Vec::with_capacity(COLUMNS.len());
        row.push(r.t.to_string());
        for group in [r.l2, r.h1, r.sup] {
            row.extend(group.iter().map(f64::to_string));
        }
        for x in [
            r.l2_total,
            r.h1_total,
            r.sup_total,
            r.energy,
            r.dissipation,
            r.weighted,
            r.gradient,
            r.mass,
            r.v_min,
            r.v_max,
            r.theta_min,
            r.theta_max,
            r.c0,
            r.alpha1,
            r.alpha2,
        ] {
            row.push(x.to_string());
        }
        row.push(r.cell_avg_ok.to_string());
        row.push(r.cell_failures.to_string());
        row.push(r.cells_skipped.to_string());
        row.push(r.q1.map_or_else(String::new, |q| q.to_string()));
        for x in [
            r.cum_dissipation,
            r.cum_weighted,
            r.cum_gradient,
            r.weighted_ratio,
        ] {
            row.push(x.to_string());
        }
        self.inner.write_record(&row)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| crate::Error::Io(e.into_error()))
    }
}
