//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{sup_diff, Manufactured};
use contact_lab::checks::{burgers_check, profile_check, source_check, source_l1};
use contact_lab::diagnostics::{phi_func, phi_roots, trapezoid, PerturbationReport};
use contact_lab::euler_riemann::{
    solve_wave_decomposition, EndState, GasModel, WaveDecomposition, DEFAULT_TOL,
};
use contact_lab::fit::loglog_slope;
use contact_lab::ns_solver::{
    init_state, run, stable_dt, FlowState, Grid, PerturbationSpec, RunOutcome, RunSettings,
    Stepper, VecSink,
};
use contact_lab::wave_profiles::{
    BurgersWave, CompositeProfile, ConstantProfile, ContactWave, Profile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn stability_gas() -> GasModel {
    GasModel::new(5.0 / 3.0, 1.0, 1.0, 1.0, 1.0).unwrap()
}

fn criterion_1() -> Verdict {
    let gammas = [1.4, 5.0 / 3.0, 2.0];
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..50 {
        let gas = GasModel::new(gammas[k % 3], 1.0, 1.0, 1.0, 1.0).unwrap();
        let (v, theta, u_m) = (
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
        );
        let (d1, dcd, d3) = (
            rng.gen_range(0.01..0.2),
            rng.gen_range(0.01..0.2),
            rng.gen_range(0.01..0.2),
        );
        let composed = WaveDecomposition::compose(&gas, v, theta, u_m, d1, dcd, d3).unwrap();
        match solve_wave_decomposition(&gas, &composed.left, &composed.right, DEFAULT_TOL) {
            Ok(s) => {
                let err = [
                    s.v_minus_m - v,
                    s.theta_minus_m - theta,
                    s.u_m - u_m,
                    s.v_plus_m - composed.v_plus_m,
                    s.theta_plus_m - composed.theta_plus_m,
                ]
                .iter()
                .fold(0.0_f64, |m, e| m.max(e.abs()));
                worst = worst.max(err);
            }
            Err(_) => failures += 1,
        }
    }
    let mut contact_worst: f64 = 0.0;
    for (k, &gamma) in gammas.iter().enumerate() {
        let gas = GasModel::new(gamma, 1.0, 1.0, 1.0, 1.0).unwrap();
        let p = 0.5 + k as f64;
        let left = EndState::new(1.0 / p, 0.3, 1.0).unwrap();
        let right = EndState::new(1.3 / p, 0.3, 1.3).unwrap();
        let d = solve_wave_decomposition(&gas, &left, &right, DEFAULT_TOL).unwrap();
        contact_worst = contact_worst.max(d.delta_r1).max(d.delta_r3);
    }
    verdict(
        failures == 0 && worst <= 1e-8 && contact_worst <= 1e-10,
        format!("50 instances, max intermediate error {worst:.2e}, pure-contact max rarefaction strength {contact_worst:.2e}"),
    )
}

fn criterion_2() -> Verdict {
    let gas = stability_gas();
    let (th_m, th_p) = (1.0, 1.1);
    let wave = ContactWave::new(&gas, th_m, th_p, 1.0).unwrap();
    let check = profile_check(&wave);
    let profile = &wave.profile;
    let delta = th_p - th_m;
    let t_end = 50.0;
    let (x, th) = common::nonlinear_diffusion(
        profile.a,
        120.0,
        2401,
        |x| th_m + 0.5 * delta * (1.0 + x.tanh()),
        t_end,
    );
    let root = (1.0 + t_end).sqrt();
    let oracle = x
        .iter()
        .zip(&th)
        .map(|(x, t)| (t - profile.eval(x / root).0).abs())
        .fold(0.0, f64::max);
    verdict(
        check.profile_passed() && oracle <= 2e-2 * delta,
        format!(
            "residual {:.2e}, monotonicity violations {}, c1 {:.4}, oracle sup difference {:.2e} (limit {:.2e})",
            check.residual_max,
            check.monotonicity_violations,
            check.c1_fit,
            oracle,
            2e-2 * delta
        ),
    )
}

fn criterion_3() -> Verdict {
    let b = BurgersWave::new(-1.0, 1.0).unwrap();
    let check = burgers_check(&b, 2001);
    let errors: Vec<f64> = [801, 1601, 3201]
        .iter()
        .map(|&n| {
            let (x, w) = common::upwind_burgers(b.w_l, b.w_r, 20.0, n, 1.0);
            let exact: Vec<f64> = x.iter().map(|x| b.eval(*x, 1.0).0).collect();
            sup_diff(&w, &exact)
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect();
    let first_order = orders.iter().all(|o| (0.8..=1.3).contains(o));
    let fans: Vec<String> = check
        .fan_distance
        .iter()
        .map(|(t, d)| format!("{t}:{d:.3e}"))
        .collect();
    verdict(
        check.passed() && first_order,
        format!(
            "bounds {}, min w_x {:.2e}, w_x slope {:.3}, fan distance [{}], upwind orders {:.2?}",
            check.bounds_ok,
            check.min_w_x,
            check.w_x_slope,
            fans.join(", "),
            orders
        ),
    )
}

/// Composite pattern shared by the source-decay criterion and the composite run.
fn composite_pattern(gas: &GasModel) -> CompositeProfile {
    let dec = WaveDecomposition::compose(gas, 2.0, 0.4, 0.0, 0.05, 0.05, 0.05).unwrap();
    CompositeProfile::new(gas, &dec).unwrap()
}

fn criterion_4() -> Verdict {
    let gas = stability_gas();
    let wave = ContactWave::new(&gas, 1.0, 1.1, 1.0).unwrap();
    let profile = profile_check(&wave);
    let composite = composite_pattern(&gas);
    let source = source_check(&composite);
    let late = [100.0, 1000.0, 10000.0];
    let late_values: Vec<f64> = late.iter().map(|&t| source_l1(&composite, t)).collect();
    let late_slope = loglog_slope(&late.map(|t| 1.0 + t), &late_values).unwrap_or(f64::NAN);
    let r1_ok = (profile.r1_slope + 1.5).abs() <= 0.3;
    verdict(
        r1_ok && source.source_slope <= -0.6,
        format!(
            "R1 slope {:.3} (target -1.5 +- 0.3), source L1 slope {:.3} over t in {{1, 10, 100}} (limit -0.6), \
             late source slope {:.3} over t in {{100, 1000, 10000}}",
            profile.r1_slope, source.source_slope, late_slope
        ),
    )
}

fn advance(stepper: &mut Stepper, gas: &GasModel, grid: &Grid, state: &mut FlowState, t_end: f64) {
    while state.t < t_end - 1e-12 {
        let dt = stable_dt(gas, grid, state, 0.5)
            .unwrap()
            .min(t_end - state.t);
        stepper.step(state, dt).unwrap();
    }
}

fn criterion_5() -> Verdict {
    let gas = GasModel::new(1.4, 1.0, 1.0, 1.0, 1.0).unwrap();
    let m = Manufactured {
        r: gas.r(),
        cv: gas.cv(),
        mu: gas.mu(),
        kappa: gas.kappa(),
    };
    let errors: Vec<f64> = [41, 81, 161]
        .iter()
        .map(|&n| {
            let grid = Grid::new(0.0, 2.0 * PI, n).unwrap();
            let mut state = FlowState::from_profile(&m, &grid, 0.0);
            let mut stepper = Stepper::new(&gas, &grid, &m).with_forcing(&m);
            advance(&mut stepper, &gas, &grid, &mut state, 1.0);
            let exact = FlowState::from_profile(&m, &grid, 1.0);
            sup_diff(&state.v, &exact.v)
                .max(sup_diff(&state.u, &exact.u))
                .max(sup_diff(&state.theta, &exact.theta))
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect();
    let mms_ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.2);

    let constant = ConstantProfile(EndState::new(1.3, 0.2, 0.8).unwrap());
    let grid = Grid::new(-5.0, 5.0, 101).unwrap();
    let mut state = FlowState::from_profile(&constant, &grid, 0.0);
    let start = state.clone();
    let mut stepper = Stepper::new(&gas, &grid, &constant);
    advance(&mut stepper, &gas, &grid, &mut state, 1.0);
    let drift = sup_diff(&state.v, &start.v)
        .max(sup_diff(&state.u, &start.u))
        .max(sup_diff(&state.theta, &start.theta));

    let balance = |n: usize| {
        let rest = ConstantProfile(EndState::new(1.0, 0.0, 1.0).unwrap());
        let grid = Grid::new(-40.0, 40.0, n).unwrap();
        let spec = PerturbationSpec::gaussian(0.05, 0.05, 0.05, 1.0, 0.0);
        let mut state = init_state(&rest, &spec, &grid).unwrap().state;
        let totals = |s: &FlowState| {
            let e: Vec<f64> =
                s.u.iter()
                    .zip(&s.theta)
                    .map(|(u, th)| 0.5 * u * u + gas.cv() * th)
                    .collect();
            [
                trapezoid(&s.v, grid.h()),
                trapezoid(&s.u, grid.h()),
                trapezoid(&e, grid.h()),
            ]
        };
        let before = totals(&state);
        let mut stepper = Stepper::new(&gas, &grid, &rest);
        advance(&mut stepper, &gas, &grid, &mut state, 2.0);
        let after = totals(&state);
        [0, 1, 2].map(|k| (after[k] - before[k]).abs())
    };
    let coarse = balance(401);
    let fine = balance(801);
    let energy_order = (coarse[2] / fine[2]).log2();
    let balance_ok = coarse[0] <= 1e-12 && coarse[1] <= 1e-12 && energy_order >= 1.7;
    verdict(
        mms_ok && drift == 0.0 && balance_ok,
        format!(
            "MMS orders {orders:.3?}, constant-state drift {drift:.1e}, mass drift {:.1e}, momentum drift {:.1e}, \
             energy drift {:.2e} -> {:.2e} (order {energy_order:.2})",
            coarse[0], coarse[1], coarse[2], fine[2]
        ),
    )
}

/// Gaussian perturbation with equal amplitudes, unit width, H1 norm 0.3.
fn perturbation(grid: &Grid) -> PerturbationSpec {
    PerturbationSpec::gaussian(1.0, 1.0, 1.0, 1.0, 0.0)
        .with_h1_norm(0.3, grid)
        .unwrap()
}

struct Stability {
    positive: bool,
    sup_final: f64,
    sup_peak: f64,
    energy_peak: f64,
    energy_early: f64,
    cum_150: f64,
    cum_final: f64,
}

impl Stability {
    fn of(outcome: &RunOutcome) -> Self {
        let reports = &outcome.reports;
        let at = |t: f64| reports.iter().find(|r| (r.t - t).abs() < 1e-9);
        let last = reports.last().unwrap();
        Self {
            positive: outcome.completed()
                && reports.iter().all(|r| r.v_min > 0.0 && r.theta_min > 0.0),
            sup_final: last.sup_total,
            sup_peak: reports.iter().map(|r| r.sup_total).fold(0.0, f64::max),
            energy_peak: reports.iter().map(|r| r.energy).fold(0.0, f64::max),
            energy_early: reports
                .iter()
                .filter(|r| r.t <= 1.0)
                .map(|r| r.energy)
                .fold(0.0, f64::max),
            cum_150: at(150.0).map_or(f64::NAN, |r| r.cum_dissipation),
            cum_final: last.cum_dissipation,
        }
    }

    fn checks(&self) -> [bool; 4] {
        [
            self.positive,
            self.sup_final <= 0.2 * self.sup_peak,
            self.energy_peak <= 1.5 * self.energy_early,
            (self.cum_final - self.cum_150).abs() <= 0.05 * self.cum_150,
        ]
    }

    fn describe(&self) -> String {
        let c = self.checks();
        format!(
            "(a) positivity {}, (b) sup {:.4e} / peak {:.4e} = {:.3} (limit 0.2), (c) energy peak / early peak {:.3} \
             (limit 1.5), (d) cumulative dissipation growth from t = 150 {:.2}% (limit 5%)",
            c[0],
            self.sup_final,
            self.sup_peak,
            self.sup_final / self.sup_peak,
            self.energy_peak / self.energy_early,
            100.0 * (self.cum_final - self.cum_150) / self.cum_150
        )
    }
}

fn stability_run(
    profile: &dyn Profile,
    composite: Option<&CompositeProfile>,
    grid: &Grid,
    alpha: f64,
) -> RunOutcome {
    let gas = stability_gas();
    let initial = init_state(profile, &perturbation(grid), grid)
        .unwrap()
        .state;
    let settings = RunSettings {
        t_final: 200.0,
        cadence: 0.5,
        safety: 0.4,
        alpha,
    };
    run(
        &gas,
        profile,
        composite,
        initial,
        grid,
        &settings,
        &mut VecSink::default(),
    )
    .unwrap()
}

fn criteria_6_and_8() -> (Verdict, Verdict) {
    let gas = stability_gas();
    let wave = ContactWave::new(&gas, 1.0, 1.1, 1.0).unwrap();
    let grid = Grid::new(-100.0, 100.0, 4001).unwrap();
    let outcome = stability_run(&wave, None, &grid, wave.profile.c1_fit / 4.0);
    let s = Stability::of(&outcome);
    let six = verdict(s.checks().iter().all(|&c| c), s.describe());

    let reports: &[PerturbationReport] = &outcome.reports;
    let cells_ok = outcome.completed() && reports.iter().all(|r| r.cell_avg_ok);
    let failures: usize = reports.iter().map(|r| r.cell_failures).sum();
    let mut levels: Vec<f64> = reports.iter().map(|r| r.c0).collect();
    levels.extend([1e-8, 1e-3, 0.1, 1.0, 10.0]);
    let mut inverse: f64 = 0.0;
    for c0 in levels {
        let (lo, hi) = phi_roots(c0).unwrap();
        for root in [lo, hi] {
            inverse = inverse.max((phi_func(root).unwrap() - c0).abs() / c0.max(1.0));
        }
    }
    let eight = verdict(
        cells_ok && inverse <= 1e-12,
        format!(
            "{} snapshots, cell bracket failures {failures}, phi_roots inverse error {inverse:.2e}",
            reports.len()
        ),
    );
    (six, eight)
}

fn criterion_7() -> Verdict {
    let gas = stability_gas();
    let composite = composite_pattern(&gas);
    let grid = Grid::new(-100.0, 200.0, 6001).unwrap();
    let outcome = stability_run(
        &composite,
        Some(&composite),
        &grid,
        composite.contact.profile.c1_fit / 4.0,
    );
    let s = Stability::of(&outcome);
    let q1_min = outcome
        .reports
        .iter()
        .map(|r| r.q1.unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let d = &composite.decomposition;
    verdict(
        s.checks().iter().all(|&c| c) && q1_min >= 0.0,
        format!(
            "strengths ({:.3}, {:.3}, {:.3}), {}, min Q1 {q1_min:.3e}",
            d.delta_r1,
            d.delta_cd,
            d.delta_r3,
            s.describe()
        ),
    )
}

fn report(index: usize, name: &str, limit: Duration, work: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = work();
    finish(index, name, limit, start.elapsed(), v)
}

fn finish(index: usize, name: &str, limit: Duration, elapsed: Duration, v: Verdict) -> bool {
    let in_time = elapsed <= limit;
    let passed = v.passed && in_time;
    println!(
        "{} {index} {name}: {} [runtime {:.1} s, limit {} s]",
        if passed { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    passed
}

fn main() {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= report(1, "riemann round-trip", secs(5), criterion_1);
    all &= report(2, "self-similar profile", secs(30), criterion_2);
    all &= report(3, "burgers properties", secs(10), criterion_3);
    all &= report(4, "residual and source decay", secs(20), criterion_4);
    all &= report(5, "solver verification", secs(60), criterion_5);
    let start = Instant::now();
    let (six, eight) = criteria_6_and_8();
    let elapsed = start.elapsed();
    let passed_6 = finish(6, "contact-wave stability", secs(15 * 60), elapsed, six);
    all &= report(7, "composite-wave stability", secs(25 * 60), criterion_7);
    let passed_8 = finish(8, "bounds diagnostics", secs(15 * 60), elapsed, eight);
    all &= passed_6 && passed_8;
    if !all {
        std::process::exit(1);
    }
}
