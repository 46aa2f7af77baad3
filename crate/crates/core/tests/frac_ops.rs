#![allow(clippy::excessive_precision)]

use fracstable::frac_ops::*;
use fracstable::special::{gamma_fn, ln_gamma};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// (-1)^k binom(order, k), mpmath at 40 digits
const FROZEN: [(f64, usize, f64); 12] = [
    (1.3, 2, 0.195),
    (1.3, 5, 0.01044225),
    (1.3, 50, 3.830_753_970_568_825_1e-5),
    (1.3, 1000, 3.788_096_740_411_263_7e-8),
    (1.7, 2, 0.595),
    (1.7, 5, 0.00889525),
    (1.7, 50, 1.078_106_499_652_663_9e-5),
    (1.7, 1000, 3.166_980_406_469_216_2e-9),
    (0.4, 2, -0.12),
    (0.4, 5, -0.029952),
    (0.4, 50, -1.129_790_583_735_804_8e-3),
    (0.4, 1000, -1.695_238_719_668_014_5e-5),
];

#[test]
fn weights_match_frozen_binomials() {
    for (order, k, want) in FROZEN {
        let w = grunwald_weights(order, k).unwrap();
        assert!(rel(w.get(k), want) < 1e-13, "order {order} k {k}: {} vs {want}", w.get(k));
    }
}

#[test]
fn weights_match_gamma_ratio() {
    // w_k = Γ(k - a) / (Γ(-a) Γ(k + 1))
    for order in [0.3, 0.75, 1.1, 1.45, 1.9] {
        let w = grunwald_weights(order, 150).unwrap();
        let g = gamma_fn(-order).unwrap();
        for k in 1..=150 {
            let lnmag = ln_gamma(k as f64 - order) - ln_gamma(k as f64 + 1.0);
            let sign = gamma_fn(k as f64 - order).unwrap().signum() * g.signum();
            let want = sign * (lnmag - g.abs().ln()).exp();
            assert!(rel(w.get(k), want) < 1e-11, "order {order} k {k}");
        }
    }
}

#[test]
fn scaled_weights_divide_by_power() {
    let w = grunwald_weights(1.5, 10).unwrap();
    let s = w.scaled(0.1);
    assert_eq!(s.scaled_by(), Some(0.1));
    for k in 0..=10 {
        assert!(rel(s.get(k), w.get(k) * 0.1f64.powf(-1.5)) < 1e-15 || w.get(k) == 0.0);
    }
}

#[test]
fn shifted_derivative_of_exponential() {
    // D^a_{-y} e^{-l y} = l^a e^{-l y}; the scheme is first order
    let (order, l) = (1.6, 1.3);
    let mut errs = Vec::new();
    for n in [2000, 4000, 8000] {
        let f = SampledFunction::from_fn(30.0, n, |y| (-l * y).exp()).unwrap();
        let d = rl_derivative_neg(&f, order).unwrap();
        let i = (1.0 / f.step()).round() as usize;
        let want = l.powf(order) * (-l * f.node(i)).exp();
        errs.push((d.values()[i] - want).abs());
    }
    assert!(errs[2] < 2e-2, "{errs:?}");
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 1.8 && ratio < 2.2, "{errs:?}");
    }
}

#[test]
fn boundary_functional_of_exponential() {
    // D^{a-1}_{-y} e^{-y} at 0 equals 1
    let f = SampledFunction::from_fn(40.0, 40_000, |y| (-y).exp()).unwrap();
    let v = rl_derivative_order_minus_one_at_zero(&f, 1.5).unwrap();
    assert!((v - 1.0).abs() < 2e-3, "{v}");
}

#[test]
fn caputo_of_polynomials() {
    for order in [1.2, 1.5, 1.9] {
        for x in [0.3, 1.0, 2.5] {
            let got = caputo_derivative(|_| 2.0, x, order).unwrap();
            let want = 2.0 * x.powf(2.0 - order) / gamma_fn(3.0 - order).unwrap();
            assert!(rel(got, want) < 1e-10);
            let got3 = caputo_derivative(|y| 6.0 * y, x, order).unwrap();
            let want3 = 6.0 * x.powf(3.0 - order) / gamma_fn(4.0 - order).unwrap();
            assert!(rel(got3, want3) < 1e-9);
        }
    }
}

#[test]
fn integrals_of_exponentials() {
    for a in [0.3, 0.5, 1.0, 1.7] {
        for x in [-1.0, 0.0, 2.0] {
            let neg = rl_integral(|y: f64| (-y).exp(), x, a, Side::Neg).unwrap();
            assert!(rel(neg, (-x).exp()) < 1e-9, "a {a} x {x}: {neg}");
            let pos = rl_integral(|y: f64| (2.0 * y).exp(), x, a, Side::Pos).unwrap();
            assert!(rel(pos, 2f64.powf(-a) * (2.0 * x).exp()) < 1e-9);
        }
    }
}

#[test]
fn rejects_orders_outside_domain() {
    assert!(grunwald_weights(0.0, 5).is_err());
    assert!(grunwald_weights(2.5, 5).is_err());
    let f = SampledFunction::from_fn(1.0, 10, |y| y).unwrap();
    assert!(rl_derivative_neg(&f, 2.0).is_err());
    assert!(rl_derivative_order_minus_one_at_zero(&f, 0.9).is_err());
    assert!(caputo_derivative(|_| 1.0, -1.0, 1.5).is_err());
    assert!(rl_integral(|y| y, 1.0, -0.5, Side::Pos).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn partial_sums_are_lower_order_weights(order in 1.01f64..1.99, n in 1usize..3000) {
        let sums = grunwald_partial_sums(order, n).unwrap();
        let lower = grunwald_weights(order - 1.0, n).unwrap();
        for m in [0, n / 3, n] {
            prop_assert!(rel(sums[m], lower.get(m)) < 1e-13);
        }
    }

    #[test]
    fn difference_identity(order in 1.01f64..1.99, n in 2usize..5000) {
        let wa = grunwald_weights(order, n).unwrap();
        let wb = grunwald_weights(order - 1.0, n).unwrap();
        let k = n / 2 + 1;
        let lhs = wa.get(k);
        let rhs = wb.get(k) - wb.get(k - 1);
        prop_assert!(((lhs - rhs) / wb.get(k - 1)).abs() < 1e-13);
    }

    #[test]
    fn sign_pattern(order in 1.01f64..1.99, n in 3usize..400) {
        let w = grunwald_weights(order, n).unwrap();
        prop_assert_eq!(w.get(0), 1.0);
        prop_assert!((w.get(1) + order).abs() < 1e-15);
        prop_assert!(w.values()[2..].iter().all(|v| *v > 0.0));
        prop_assert!(w.values()[2..].windows(2).all(|p| p[1] < p[0]));
        let total: f64 = w.values().iter().sum();
        prop_assert!(total < 0.0);
    }

    #[test]
    fn tail_decays_like_power(order in 1.05f64..1.95) {
        let n = 20_000;
        let w = grunwald_weights(order, n).unwrap();
        let c = order * (order - 1.0) / gamma_fn(2.0 - order).unwrap();
        let ratio = w.get(n) / (c * (n as f64).powf(-order - 1.0));
        prop_assert!((ratio - 1.0).abs() < 0.01);
    }
}
