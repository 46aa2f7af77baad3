//! Discrete and quadrature realizations of the Riemann–Liouville and Caputo
//! operators on the half-line.

use crate::error::{Error, Result};
use crate::frac_ops::weights::raw_weights;
use crate::quad::{integrate, integrate_with_breaks, QuadConfig};
use crate::special::gamma_unchecked;

/// Samples of a function on the uniform grid `left + i h`, `i = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    h: f64,
    left: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(h: f64, left: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::domain("SampledFunction::new", format!("grid step must be positive, got {h}")));
        }
        Ok(Self { h, left, values })
    }

    /// Samples `f` at `N + 1` nodes covering `[0, y_max]`.
    pub fn from_fn(y_max: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("SampledFunction::from_fn", "need at least one interval"));
        }
        let h = y_max / n as f64;
        Self::new(h, 0.0, (0..=n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn left_endpoint(&self) -> f64 {
        self.left
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        self.left + i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_order_1_2(op: &'static str, order: f64) -> Result<()> {
    if order > 1.0 && order < 2.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("order must lie in (1, 2), got {order}")))
    }
}

/// Shifted Grünwald approximation of the negative-direction derivative
/// `D^α_{-y} f` at every node, with `f ≡ 0` outside the sampled range:
/// `(1/h^α) Σ_{k≥0} w_k f(y_{i+k-1})`.
pub fn rl_derivative_neg(f: &SampledFunction, order: f64) -> Result<SampledFunction> {
    const OP: &str = "rl_derivative_neg";
    check_order_1_2(OP, order)?;
    let n = f.values.len();
    if n < 3 {
        return Err(Error::domain(OP, format!("need at least 3 grid points, got {n}")));
    }
    let w = raw_weights(order, n);
    let scale = f.h.powf(-order);
    let v = &f.values;
    let out = (0..n)
        .map(|i| {
            // node i-1 is outside the domain for i = 0
            let start = i.saturating_sub(1);
            let k0 = if i == 0 { 1 } else { 0 };
            let s: f64 = v[start..]
                .iter()
                .zip(&w[k0..])
                .map(|(fv, wk)| fv * wk)
                .sum();
            s * scale
        })
        .collect();
    Ok(SampledFunction {
        h: f.h,
        left: f.left,
        values: out,
    })
}

/// Unshifted Grünwald boundary functional `(1/h^{α-1}) Σ_k w^{α-1}_k f(y_k)`,
/// the discrete `D^{α-1}_{-y} f(0)`. Accepts `order ∈ (1, 2]`.
pub fn rl_derivative_order_minus_one_at_zero(f: &SampledFunction, order: f64) -> Result<f64> {
    if !(order > 1.0 && order <= 2.0) {
        return Err(Error::domain(
            "rl_derivative_order_minus_one_at_zero",
            format!("order must lie in (1, 2], got {order}"),
        ));
    }
    let w = raw_weights(order - 1.0, f.values.len() - 1);
    let s: f64 = f.values.iter().zip(&w).map(|(a, b)| a * b).sum();
    Ok(s * f.h.powf(1.0 - order))
}

/// Caputo derivative of order `α ∈ (1, 2)` at `x > 0` from the second
/// derivative, `(1/Γ(2-α)) ∫₀^x (x-y)^{1-α} f''(y) dy`.
///
/// The kernel singularity is removed by `u = (x - y)^{2-α}`.
pub fn caputo_derivative(f_second: impl Fn(f64) -> f64, x: f64, order: f64) -> Result<f64> {
    const OP: &str = "caputo_derivative";
    check_order_1_2(OP, order)?;
    if !(x > 0.0) {
        return Err(Error::domain(OP, format!("x must be positive, got {x}")));
    }
    let p = 2.0 - order;
    let upper = x.powf(p);
    let g = |u: f64| f_second(x - u.powf(1.0 / p));
    let r = integrate(g, 0.0, upper, QuadConfig::new(1e-12, 1e-11))?;
    Ok(r.value / (p * gamma_unchecked(p)))
}

/// Direction of a Riemann–Liouville fractional integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(1/Γ(a)) ∫_{-∞}^x f(y) (x-y)^{a-1} dy`
    Pos,
    /// `(1/Γ(a)) ∫_x^∞ f(y) (y-x)^{a-1} dy`
    Neg,
}

/// Riemann–Liouville fractional integral of positive `order` at `x`.
///
/// Writes the integral as `∫₀^∞ f(x ∓ v) v^{a-1} dv`; the piece on `[0, 1]` is
/// regularized by `v = s^{1/a}` and the tail is mapped to a finite interval.
pub fn rl_integral(f: impl Fn(f64) -> f64, x: f64, order: f64, side: Side) -> Result<f64> {
    const OP: &str = "rl_integral";
    if !(order > 0.0) || !order.is_finite() {
        return Err(Error::domain(OP, format!("order must be positive, got {order}")));
    }
    let sign = match side {
        Side::Pos => -1.0,
        Side::Neg => 1.0,
    };
    let a = order;
    let cfg = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_intervals: 600,
    };
    // v in [0, 1]: v^{a-1} dv = ds / a
    let near = integrate(|s: f64| f(x + sign * s.powf(1.0 / a)) / a, 0.0, 1.0, cfg)?;
    // v in [1, ∞): v = 1/τ, dv = dτ/τ², τ in (0, 1]
    let far_integrand = |tau: f64| {
        if tau <= 0.0 {
            return 0.0;
        }
        let v = 1.0 / tau;
        f(x + sign * v) * v.powf(a - 1.0) * v * v
    };
    let far = integrate_with_breaks(far_integrand, &[0.0, 0.01, 0.1, 1.0], cfg).map_err(|e| match e {
        Error::Numeric { residual, .. } => Error::numeric(OP, "integral appears divergent", residual),
        other => other,
    })?;
    Ok((near.value + far.value) / gamma_unchecked(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_zero_derivative() {
        let f = SampledFunction::from_fn(5.0, 50, |_| 0.0).unwrap();
        let d = rl_derivative_neg(&f, 1.4).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn too_few_points() {
        let f = SampledFunction::new(0.1, 0.0, vec![1.0, 2.0]).unwrap();
        assert!(rl_derivative_neg(&f, 1.5).unwrap_err().is_domain());
        assert!(rl_derivative_neg(&SampledFunction::from_fn(1.0, 4, |y| y).unwrap(), 2.0).is_err());
    }

    #[test]
    fn boundary_functional_at_order_two_is_one_sided_difference() {
        let f = SampledFunction::from_fn(1.0, 10, |y| (y * 3.0).sin() + 2.0).unwrap();
        let d = rl_derivative_order_minus_one_at_zero(&f, 2.0).unwrap();
        let v = f.values();
        assert!((d - (v[0] - v[1]) / f.step()).abs() < 1e-12);
    }

    #[test]
    fn caputo_of_linear_is_zero() {
        let v = caputo_derivative(|_| 0.0, 2.0, 1.3).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn rl_integral_order_one_is_plain_integral() {
        let v = rl_integral(|y| (-y * y).exp(), 0.0, 1.0, Side::Neg).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
        let v = rl_integral(|y| if y > 0.0 { (-y).exp() } else { 0.0 }, 2.0, 1.0, Side::Pos).unwrap();
        assert!((v - (1.0 - (-2.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn rl_integral_rejects_bad_order() {
        assert!(rl_integral(|y| y, 0.0, 0.0, Side::Pos).unwrap_err().is_domain());
    }
}
