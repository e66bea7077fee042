use crate::{Error, Result};

/// `Phi(z) = z - ln z - 1`, evaluated without cancellation near `z = 1`.
pub fn phi_func(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "Phi needs a positive argument, got {z}"
        )));
    }
    Ok(phi_unchecked(z))
}

fn phi_unchecked(z: f64) -> f64 {
    let d = z - 1.0;
    if d.abs() < 0.5 {
        d - d.ln_1p()
    } else {
        d - z.ln()
    }
}

fn bisect(mut lo: f64, mut hi: f64, c0: f64, increasing: bool) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = phi_unchecked(mid) > c0;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Pick whichever endpoint is closer in value.
    if (phi_unchecked(lo) - c0).abs() <= (phi_unchecked(hi) - c0).abs() {
        lo
    } else {
        hi
    }
}

/// The two roots `alpha1 < 1 < alpha2` of `Phi(y) = c0`.
pub fn phi_roots(c0: f64) -> Result<(f64, f64)> {
    if !(c0 > 0.0) || !c0.is_finite() {
        return Err(Error::domain(format!("root bounds need C0 > 0, got {c0}")));
    }
    // Phi(y) > -ln y on (0, 1) so exp(-c0-1) is below the left root, and
    // Phi(y) > y/2 for y large enough that ln y + 1 < y/2.
    let lower = (-c0 - 1.0).exp();
    let mut upper = 2.0 * (c0 + 2.0);
    while phi_unchecked(upper) < c0 {
        upper *= 2.0;
    }
    let alpha1 = bisect(lower, 1.0, c0, false);
    let alpha2 = bisect(1.0, upper, c0, true);
    Ok((alpha1, alpha2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    #[test]
    fn known_values() {
        assert_eq!(phi_func(1.0).unwrap(), 0.0);
        assert!((phi_func(E).unwrap() - (E - 2.0)).abs() < 1e-15);
        assert!(phi_func(0.0).is_err());
        assert!(phi_func(-1.0).is_err());
    }

    #[test]
    fn quadratic_lower_bound() {
        for k in 0..=9900 {
            let z = 0.1 + k as f64 * 1e-3;
            let bound = (z - 1.0).powi(2) / (2.0 * z.max(1.0).powi(2));
            assert!(phi_func(z).unwrap() >= bound - 1e-16, "z = {z}");
        }
    }

    #[test]
    fn roots_near_degenerate_minimum() {
        let (a1, a2) = phi_roots(1e-8).unwrap();
        assert!((a1 - 1.0).abs() <= 2e-4 && (a2 - 1.0).abs() <= 2e-4);
        assert!(a1 < 1.0 && a2 > 1.0);
    }

    #[test]
    fn root_at_e() {
        let (_, a2) = phi_roots(E - 2.0).unwrap();
        assert!((a2 - E).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_c0_rejected() {
        assert!(phi_roots(0.0).is_err());
        assert!(phi_roots(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn roots_invert_phi(c0 in 1e-6f64..50.0) {
            let (a1, a2) = phi_roots(c0).unwrap();
            prop_assert!(0.0 < a1 && a1 < 1.0 && 1.0 < a2);
            prop_assert!((phi_func(a1).unwrap() - c0).abs() <= 1e-12 * c0.max(1.0));
            prop_assert!((phi_func(a2).unwrap() - c0).abs() <= 1e-12 * c0.max(1.0));
        }

        #[test]
        fn phi_is_convex(z in 0.05f64..20.0, dz in 1e-3f64..0.04) {
            let mid = phi_func(z).unwrap();
            let left = phi_func(z - dz).unwrap();
            let right = phi_func(z + dz).unwrap();
            prop_assert!(left + right - 2.0 * mid >= -1e-15);
            prop_assert!(mid >= 0.0);
        }
    }
}
