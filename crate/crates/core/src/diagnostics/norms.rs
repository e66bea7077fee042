use serde::Serialize;

use crate::ns_solver::Grid;

/// Discrete L2, H1 and sup norms of one field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ComponentNorms {
    pub l2: f64,
    pub h1: f64,
    pub sup: f64,
}

/// Composite trapezoid rule with uniform spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}

/// Second-order finite-difference derivative on a uniform grid.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            let d = (values[1] - values[0]) / h;
            out.fill(d);
        }
        return out;
    }
    let inv_2h = 0.5 / h;
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) * inv_2h;
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv_2h;
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv_2h;
    out
}

pub fn norms(field: &[f64], grid: &Grid) -> ComponentNorms {
    let h = grid.h();
    let squares: Vec<f64> = field.iter().map(|f| f * f).collect();
    let l2_sq = trapezoid(&squares, h);
    let dx: Vec<f64> = derivative(field, h).iter().map(|d| d * d).collect();
    let grad_sq = trapezoid(&dx, h);
    ComponentNorms {
        l2: l2_sq.sqrt(),
        h1: (l2_sq + grad_sq).sqrt(),
        sup: field.iter().fold(0.0_f64, |m, f| m.max(f.abs())),
    }
}
