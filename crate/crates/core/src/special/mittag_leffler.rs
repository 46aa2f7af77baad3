//! One-parameter Mittag-Leffler function on the nonpositive real axis.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadConfig};
use crate::special::gamma::ln_gamma;

const SERIES_RADIUS: f64 = 1.0;

/// `E_β(z)` for `β ∈ (0, 1)` and `z ≤ 0`.
///
/// Small `|z|` uses the power series; otherwise the Laplace-type integral
/// `E_β(-x) = sin(βπ)/(πβ) ∫₀^∞ exp(-(vx)^{1/β}) / (v² + 2v cos βπ + 1) dv`.
pub fn mittag_leffler(beta: f64, z: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(
            "mittag_leffler",
            format!("beta must lie in (0, 1), got {beta}"),
        ));
    }
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::domain(
            "mittag_leffler",
            format!("z must be finite and nonpositive, got {z}"),
        ));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if -z <= SERIES_RADIUS {
        Ok(series(beta, z))
    } else {
        integral(beta, -z)
    }
}

fn series(beta: f64, z: f64) -> f64 {
    let lnz = (-z).ln();
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 1..2000 {
        let kf = k as f64;
        let mag = (kf * lnz - ln_gamma(beta * kf + 1.0)).exp();
        let term = if k % 2 == 0 { mag } else { -mag };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if mag < 1e-18 {
            break;
        }
    }
    sum + comp
}

fn integral(beta: f64, x: f64) -> Result<f64> {
    // w = v x; the exponential factor then lives on w = O(1)
    let c = (beta * PI).cos();
    let inv_b = 1.0 / beta;
    let integrand = |w: f64| {
        let v = w / x;
        (-w.powf(inv_b)).exp() / (v * v + 2.0 * v * c + 1.0)
    };
    let w_max = 745f64.powf(beta);
    let mut breaks = vec![0.0, 1.0_f64.min(w_max)];
    if x < w_max && x > 1.0 {
        // near-resonance of the denominator at v = 1 when β is close to 1
        breaks.push(x);
    }
    breaks.push(w_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let r = integrate_with_breaks(integrand, &breaks, QuadConfig::new(1e-15, 1e-13))?;
    Ok((beta * PI).sin() / (PI * beta * x) * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        for &b in &[0.1, 0.5, 0.9] {
            assert_eq!(mittag_leffler(b, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for &b in &[0.3, 0.5, 0.75, 0.95] {
            for &z in &[-0.5, -1.0] {
                let s = series(b, z);
                let i = integral(b, -z).unwrap();
                assert!((s - i).abs() < 1e-12, "beta={b} z={z}: {s} vs {i}");
            }
        }
    }

    #[test]
    fn domain() {
        assert!(mittag_leffler(1.0, -1.0).is_err());
        assert!(mittag_leffler(0.5, 0.1).is_err());
        assert!(mittag_leffler(0.5, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn strictly_decreasing_on_negative_axis() {
        let mut prev = 1.0;
        for i in 1..200 {
            let z = -0.05 * i as f64;
            let v = mittag_leffler(0.6, z).unwrap();
            assert!(v < prev, "z={z}");
            prev = v;
        }
    }
}
