#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use fracstable::quad::{integrate_to_infinity, QuadConfig};
use fracstable::special::*;
use fracstable::StableParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// mpmath, 40 digits
const GAMMA: [(f64, f64); 10] = [
    (-9.5, 2.772_127_911_575_102_1e-6),
    (-3.25, 0.536_250_727_916_385_43),
    (-0.5, -3.544_907_701_811_032_1),
    (0.1, 9.513_507_698_668_731_8),
    (0.5, 1.772_453_850_905_516),
    (1.5, 0.886_226_925_452_758),
    (3.7, 4.170_651_783_796_603_2),
    (10.25, 639_232.598_779_576_8),
    (25.5, 3.086_770_540_528_696_8e24),
    (49.9, 4.118_011_034_253_058e62),
];

const MITTAG_LEFFLER: [(f64, f64, f64); 6] = [
    (0.3, 0.5, 0.632_649_005_943_599_02),
    (0.5, 1.0, 0.427_583_576_155_807),
    (0.5, 3.0, 0.179_001_151_181_389_95),
    (0.7, 2.0, 0.213_786_727_015_297_27),
    (0.9, 5.0, 0.034_431_324_804_098_424),
    (0.6, 10.0, 0.046_589_654_426_804_279),
];

// g_beta(u), series summed at 120 digits
const ONE_SIDED: [(f64, f64, f64); 8] = [
    (0.5, 0.3, 0.746_107_005_296_797_34),
    (0.5, 2.0, 0.088_016_331_691_074_869),
    (0.6, 0.5, 0.678_015_889_334_895_21),
    (0.6, 3.0, 0.052_563_610_942_113_185),
    (0.75, 1.0, 0.454_948_907_692_706_98),
    (0.9, 0.8, 2.054_167_460_836_843_2),
    (0.3, 0.2, 0.572_906_208_837_652_18),
    (0.3, 5.0, 0.019_154_354_837_293_765),
];

#[test]
fn gamma_matches_frozen_values() {
    for (x, want) in GAMMA {
        let got = gamma_fn(x).unwrap();
        assert!(rel(got, want) < 1e-13, "Γ({x}) = {got}, want {want}");
        assert!((ln_gamma(x) - want.abs().ln()).abs() < 1e-12);
    }
}

#[test]
fn gamma_rejects_poles() {
    for x in [0.0, -1.0, -7.0] {
        assert!(gamma_fn(x).is_err());
    }
}

#[test]
fn mittag_leffler_matches_frozen_values() {
    for (b, x, want) in MITTAG_LEFFLER {
        let got = mittag_leffler(b, -x).unwrap();
        assert!(rel(got, want) < 1e-10, "E_{b}(-{x}) = {got}, want {want}");
    }
}

#[test]
fn mittag_leffler_half_is_scaled_erfc() {
    for x in [0.1f64, 0.5, 1.0, 2.0, 4.0] {
        let want = (x * x).exp() * libm::erfc(x);
        assert!(rel(mittag_leffler(0.5, -x).unwrap(), want) < 1e-10);
    }
}

#[test]
fn one_sided_density_matches_frozen_values() {
    for (b, u, want) in ONE_SIDED {
        let got = stable_subordinator_density(u, b).unwrap();
        assert!(rel(got, want) < 1e-10, "g_{b}({u}) = {got}, want {want}");
    }
}

/// Fixed Talbot inversion of `F(s)` at `t`.
fn talbot(f: impl Fn(Complex64) -> Complex64, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut sum = 0.5 * (f(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let th = k as f64 * PI / m as f64;
        let cot = th.cos() / th.sin();
        let s = Complex64::new(r * th * cot, r * th);
        let sigma = Complex64::new(th + (th * cot - 1.0) * cot, 0.0);
        let sigma = Complex64::new(0.0, 1.0) * sigma + Complex64::new(1.0, 0.0);
        sum += ((s * t).exp() * f(s) * sigma).re;
    }
    sum * r / m as f64
}

#[test]
fn one_sided_density_inverts_laplace_transform() {
    for beta in [0.5, 0.65, 0.8] {
        for u in [0.4, 1.0, 2.5, 6.0] {
            let want = talbot(|s| (-s.powf(beta)).exp(), u, 32);
            let got = stable_subordinator_density(u, beta).unwrap();
            assert!((got - want).abs() < 1e-9 * want.max(1e-3), "beta {beta} u {u}: {got} vs {want}");
        }
    }
}

#[test]
fn laplace_transform_of_inverse_density_is_mittag_leffler() {
    // ∫ e^{-l r} h(r, t) dr = E_β(-l t^β)
    let cfg = QuadConfig::new(1e-13, 1e-11);
    for beta in [0.5, 0.7] {
        for (l, t) in [(1.0, 1.0), (0.5, 2.0)] {
            let v = integrate_to_infinity(
                |r| if r > 0.0 { (-l * r).exp() * inverse_subordinator_density_beta(r, t, beta).unwrap() } else { 0.0 },
                0.0,
                cfg,
            )
            .unwrap()
            .value;
            let want = mittag_leffler(beta, -l * t.powf(beta)).unwrap();
            assert!((v - want).abs() < 1e-8, "beta {beta}: {v} vs {want}");
        }
    }
}

#[test]
fn half_order_closed_forms() {
    let p = StableParams::from_alpha(2.0).unwrap();
    for t in [0.3f64, 1.0, 4.0] {
        for r in [0.05f64, 0.5, 1.0, 3.0] {
            let want = (-r * r / (4.0 * t)).exp() / (PI * t).sqrt();
            assert!((inverse_subordinator_density(r, t, &p).unwrap() - want).abs() < 1e-12);
        }
    }
    assert!((reflected_density_from_zero(0.0, 1.0, &p).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-14);
    assert_eq!(reflected_density_from_zero(-1.0, 1.0, &p).unwrap(), 0.0);
}

#[test]
fn density_masses() {
    let cfg = QuadConfig::new(1e-12, 1e-10);
    for alpha in [1.2, 1.5, 1.8] {
        let params = StableParams::from_alpha(alpha).unwrap();
        let d = StableDensities::new(params);
        let mass = integrate_to_infinity(|x| d.reflected(x, 1.0), 0.0, cfg).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-8, "alpha {alpha}: {mass}");
        // Y_1 puts mass 1/alpha on the positive half-line
        let pos = integrate_to_infinity(|x| if x > 0.0 { spectrally_negative_density_pos(x, 1.0, &params).unwrap() } else { 0.0 }, 0.0, cfg)
            .unwrap()
            .value;
        assert!((pos - 1.0 / alpha).abs() < 1e-8);
        let first = integrate_to_infinity(|x| x * d.reflected(x, 1.0), 0.0, cfg).unwrap().value;
        let b = params.beta();
        assert!(rel(first, 1.0 / gamma_fn(1.0 + b).unwrap()) < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gamma_recurrence(x in -20.0f64..40.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let g = gamma_fn(x).unwrap();
        let g1 = gamma_fn(x + 1.0).unwrap();
        prop_assert!(rel(g1, x * g) < 1e-13);
    }

    #[test]
    fn mittag_leffler_is_completely_monotone_sample(beta in 0.1f64..0.95, x in 0.0f64..30.0) {
        let a = mittag_leffler(beta, -x).unwrap();
        let b = mittag_leffler(beta, -x - 0.25).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(b < a);
    }

    #[test]
    fn inverse_density_self_similar(beta in 0.5f64..0.95, r in 0.01f64..5.0, t in 0.05f64..5.0) {
        let lhs = inverse_subordinator_density_beta(r, t, beta).unwrap();
        let rhs = t.powf(-beta) * inverse_subordinator_density_beta(r * t.powf(-beta), 1.0, beta).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300) + 1e-300, "{beta} {r} {t}");
    }

    #[test]
    fn densities_nonnegative(beta in 0.2f64..0.95, u in 0.001f64..50.0) {
        let g = stable_subordinator_density(u, beta).unwrap();
        prop_assert!(g >= 0.0 && g.is_finite());
    }
}
