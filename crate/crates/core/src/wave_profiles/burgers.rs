use crate::{Error, Result};

/// Beyond this foot position `tanh` is replaced by its asymptote.
const CLAMP: f64 = 40.0;
const NEWTON_TOL: f64 = 1e-12;

/// Smooth solution of `w_t + w w_x = 0` with data
/// `w(x, 0) = (w_r + w_l)/2 + (w_r - w_l)/2 tanh x`, evaluated by inverting the
/// characteristic map `x = x0 + t w0(x0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BurgersWave {
    pub w_l: f64,
    pub w_r: f64,
}

impl BurgersWave {
    /// `w_l == w_r` is accepted and gives the constant solution.
    pub fn new(w_l: f64, w_r: f64) -> Result<Self> {
        if !(w_l.is_finite() && w_r.is_finite()) || w_l > w_r {
            return Err(Error::domain(format!(
                "rarefaction data needs w_l <= w_r, got w_l = {w_l}, w_r = {w_r}"
            )));
        }
        Ok(Self { w_l, w_r })
    }

    fn mean(&self) -> f64 {
        0.5 * (self.w_r + self.w_l)
    }

    fn half_jump(&self) -> f64 {
        0.5 * (self.w_r - self.w_l)
    }

    /// Initial data and its derivative at the foot `x0`.
    fn initial(&self, x0: f64) -> (f64, f64) {
        let d = self.half_jump();
        if x0 > CLAMP {
            return (self.w_r, d * sech2(x0));
        }
        if x0 < -CLAMP {
            return (self.w_l, d * sech2(x0));
        }
        (self.mean() + d * x0.tanh(), d * sech2(x0))
    }

    /// Foot of the characteristic through `(x, t)`.
    pub fn foot(&self, x: f64, t: f64) -> f64 {
        if t == 0.0 || self.w_l == self.w_r {
            return x - t * self.w_l;
        }
        // x0 lies in [x - t w_r, x - t w_l] because w0 takes values in (w_l, w_r)
        let mut lo = x - t * self.w_r;
        let mut hi = x - t * self.w_l;
        let mut x0 = (x - t * self.mean()).clamp(lo, hi);
        let mut last_step = hi - lo;
        for _ in 0..200 {
            let (w0, dw0) = self.initial(x0);
            let f = x0 + t * w0 - x;
            if f.abs() <= NEWTON_TOL * (1.0 + x.abs()) {
                return x0;
            }
            if f > 0.0 {
                hi = x0;
            } else {
                lo = x0;
            }
            // Newton is accepted only when it stays inside the bracket and at
            // least halves the previous step, otherwise bisect.
            let newton = x0 - f / (1.0 + t * dw0);
            let next = if newton > lo && newton < hi && (newton - x0).abs() <= 0.5 * last_step {
                newton
            } else {
                0.5 * (lo + hi)
            };
            last_step = (next - x0).abs();
            x0 = next;
            if hi - lo <= f64::EPSILON * (1.0 + x0.abs()) {
                return x0;
            }
        }
        x0
    }

    /// `(w, w_x)` at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (f64, f64) {
        let x0 = self.foot(x, t);
        let (w0, dw0) = self.initial(x0);
        (w0, dw0 / (1.0 + t * dw0))
    }

    /// Centred rarefaction fan `w^r(x / t)` of the Riemann data.
    pub fn riemann_fan(&self, x: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return if x < 0.0 { self.w_l } else { self.w_r };
        }
        (x / t).clamp(self.w_l, self.w_r)
    }
}

/// `sech^2 x` without overflow.
fn sech2(x: f64) -> f64 {
    let e = (-2.0 * x.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}
