mod common;

use common::{sup_diff, Manufactured};
use contact_lab::diagnostics::trapezoid;
use contact_lab::euler_riemann::{EndState, GasModel};
use contact_lab::ns_solver::{
    init_state, rhs, stable_dt, FlowState, Grid, PerturbationSpec, Stepper,
};
use contact_lab::wave_profiles::{ConstantProfile, ContactWave, Profile};
use std::f64::consts::PI;

fn gas() -> GasModel {
    GasModel::new(1.4, 1.0, 1.0, 1.0, 1.0).unwrap()
}

fn manufactured(gas: &GasModel) -> Manufactured {
    Manufactured {
        r: gas.r(),
        cv: gas.cv(),
        mu: gas.mu(),
        kappa: gas.kappa(),
    }
}

fn advance(
    stepper: &mut Stepper,
    gas: &GasModel,
    grid: &Grid,
    state: &mut FlowState,
    t_end: f64,
    safety: f64,
) {
    while state.t < t_end - 1e-12 {
        let dt = stable_dt(gas, grid, state, safety)
            .unwrap()
            .min(t_end - state.t);
        stepper.step(state, dt).unwrap();
    }
}

fn mms_error(n: usize) -> f64 {
    let g = gas();
    let m = manufactured(&g);
    let grid = Grid::new(0.0, 2.0 * PI, n).unwrap();
    let mut state = FlowState::from_profile(&m, &grid, 0.0);
    let mut stepper = Stepper::new(&g, &grid, &m).with_forcing(&m);
    advance(&mut stepper, &g, &grid, &mut state, 1.0, 0.5);
    let exact = FlowState::from_profile(&m, &grid, 1.0);
    sup_diff(&state.v, &exact.v)
        .max(sup_diff(&state.u, &exact.u))
        .max(sup_diff(&state.theta, &exact.theta))
}

#[test]
fn manufactured_solution_converges_at_second_order() {
    let errors: Vec<f64> = [41, 81, 161].iter().map(|&n| mms_error(n)).collect();
    for pair in errors.windows(2) {
        let order = (pair[0] / pair[1]).log2();
        assert!((1.8..=2.2).contains(&order), "errors {errors:?}");
    }
}

#[test]
fn constant_state_is_stationary() {
    let g = gas();
    let end = EndState::new(1.3, 0.2, 0.8).unwrap();
    let profile = ConstantProfile(end);
    let grid = Grid::new(-5.0, 5.0, 101).unwrap();
    let mut state = FlowState::from_profile(&profile, &grid, 0.0);
    let mut stepper = Stepper::new(&g, &grid, &profile);
    for _ in 0..200 {
        let dt = stable_dt(&g, &grid, &state, 0.9).unwrap();
        stepper.step(&mut state, dt).unwrap();
    }
    let exact = FlowState::from_profile(&profile, &grid, state.t);
    assert!(sup_diff(&state.v, &exact.v) <= 1e-14);
    assert!(sup_diff(&state.u, &exact.u) <= 1e-14);
    assert!(sup_diff(&state.theta, &exact.theta) <= 1e-14);
}

fn balances(n: usize) -> (f64, f64, f64) {
    let g = gas();
    let profile = ConstantProfile(EndState::new(1.0, 0.0, 1.0).unwrap());
    let grid = Grid::new(-40.0, 40.0, n).unwrap();
    let spec = PerturbationSpec::gaussian(0.05, 0.05, 0.05, 1.0, 0.0);
    let mut state = init_state(&profile, &spec, &grid).unwrap().state;
    let h = grid.h();
    let totals = |s: &FlowState| {
        let energy: Vec<f64> =
            s.u.iter()
                .zip(&s.theta)
                .map(|(u, th)| 0.5 * u * u + g.cv() * th)
                .collect();
        (
            trapezoid(&s.v, h),
            trapezoid(&s.u, h),
            trapezoid(&energy, h),
        )
    };
    let (m0, p0, e0) = totals(&state);
    let mut stepper = Stepper::new(&g, &grid, &profile);
    advance(&mut stepper, &g, &grid, &mut state, 2.0, 0.5);
    let (m1, p1, e1) = totals(&state);
    ((m1 - m0).abs(), (p1 - p0).abs(), (e1 - e0).abs())
}

#[test]
fn mass_and_momentum_are_conserved_and_energy_drift_is_second_order() {
    let (dm, dp, de_coarse) = balances(401);
    assert!(dm <= 1e-12, "mass drift {dm:e}");
    assert!(dp <= 1e-12, "momentum drift {dp:e}");
    let (_, _, de_fine) = balances(801);
    let order = (de_coarse / de_fine).log2();
    assert!(order >= 1.7, "energy drift {de_coarse:e} then {de_fine:e}");
}

#[test]
fn runge_kutta_local_error_scales_with_fifth_power() {
    // One step of size dt against two of size dt/2 differ by C dt^5.
    let g = gas();
    let m = manufactured(&g);
    let grid = Grid::new(0.0, 2.0 * PI, 41).unwrap();
    let state = FlowState::from_profile(&m, &grid, 0.3);
    let base = stable_dt(&g, &grid, &state, 1.0).unwrap();
    let gap = |dt: f64| {
        let mut stepper = Stepper::new(&g, &grid, &m).with_forcing(&m);
        let mut big = state.clone();
        stepper.step(&mut big, dt).unwrap();
        let mut small = state.clone();
        stepper.step(&mut small, 0.5 * dt).unwrap();
        stepper.step(&mut small, 0.5 * dt).unwrap();
        sup_diff(&big.u, &small.u).max(sup_diff(&big.theta, &small.theta))
    };
    let ratio = gap(base / 4.0) / gap(base / 8.0);
    assert!((24.0..=40.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn contact_run_converges_under_refinement() {
    let g = gas();
    let wave = ContactWave::new(&g, 1.0, 1.2, 1.0).unwrap();
    let spec = PerturbationSpec::gaussian(0.05, 0.05, 0.05, 1.0, 0.0);
    let solve = |n: usize| {
        let grid = Grid::new(-30.0, 30.0, n).unwrap();
        let mut state = init_state(&wave, &spec, &grid).unwrap().state;
        let mut stepper = Stepper::new(&g, &grid, &wave);
        advance(&mut stepper, &g, &grid, &mut state, 10.0, 0.5);
        state
    };
    let (coarse, mid, fine) = (solve(241), solve(481), solve(961));
    let restrict = |f: &[f64], k: usize| f.iter().step_by(k).copied().collect::<Vec<_>>();
    let e1 = sup_diff(&coarse.u, &restrict(&mid.u, 2))
        .max(sup_diff(&coarse.theta, &restrict(&mid.theta, 2)));
    let e2 = sup_diff(&restrict(&mid.u, 2), &restrict(&fine.u, 4)).max(sup_diff(
        &restrict(&mid.theta, 2),
        &restrict(&fine.theta, 4),
    ));
    let order = (e1 / e2).log2();
    assert!(order >= 1.8, "differences {e1:e} then {e2:e}");
}

#[test]
fn discrete_operator_on_contact_wave_leaves_its_residuals() {
    let g = gas();
    // A finely tabulated profile keeps interpolation error below the stencil error.
    let wave = ContactWave::with_grid(&g, 1.0, 1.3, 1.0, 12.0, 8001, 1e-10).unwrap();
    let t = 2.0;
    let worst = |n: usize| {
        let grid = Grid::new(-10.0, 10.0, n).unwrap();
        let state = FlowState::from_profile(&wave, &grid, t);
        let d = rhs(&g, &grid, &state, &wave, None).unwrap();
        let mut err = [0.0_f64; 3];
        let mut r1_max = 0.0_f64;
        for i in 1..n - 1 {
            let x = grid.x(i);
            let s = wave.sample(x, t);
            let (r1, r2) = wave.residuals(x, t);
            err[0] = err[0].max((d.v[i] - s.u_x).abs());
            r1_max = r1_max.max(r1.abs());
            err[1] = err[1].max((d.u[i] - s.u_t + r1).abs());
            err[2] = err[2].max((g.cv() * (d.theta[i] - s.theta_t) + r2).abs());
        }
        (err, r1_max)
    };
    let ((a, _), (b, r1_max)) = (worst(201), worst(401));
    for k in [0, 2] {
        let order = (a[k] / b[k]).log2();
        assert!(order >= 1.7, "component {k}: {:e} then {:e}", a[k], b[k]);
    }
    // The tabulated R1 carries its own difference error, so only its size is compared.
    assert!(
        b[1] <= 0.05 * r1_max,
        "momentum mismatch {:e} against R1 {r1_max:e}",
        b[1]
    );
}
