use fracstable::par::{sample_vec, try_sample_vec, McPlan};
use fracstable::rng::RngStream;
use fracstable::special::gamma_fn;
use fracstable::stochastic::*;
use fracstable::StableParams;
use proptest::prelude::*;

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn half_order_subordinator_law() {
    // D_1 = 1/(2 G^2): P(D_1 <= u) = erfc(1 / (2 sqrt u))
    let s = SubordinatorSampler::new(0.5).unwrap();
    let xs = sample_vec(&McPlan::new(17, 50_000), |rng| s.sample_unit(rng));
    let ks = ks_one_sample(&xs, |u| if u > 0.0 { libm::erfc(0.5 / u.sqrt()) } else { 0.0 }).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn subordinator_laplace_transform() {
    for beta in [0.55, 0.7, 0.9] {
        let s = SubordinatorSampler::new(beta).unwrap();
        for (k, lam) in [0.5f64, 2.0].into_iter().enumerate() {
            let xs = sample_vec(&McPlan::new(100 + k as u64, 100_000), |rng| (-lam * s.sample(2.0, rng)).exp());
            let (m, sd) = mean_sd(&xs);
            let want = (-2.0 * lam.powf(beta)).exp();
            assert!((m - want).abs() < 4.0 * sd, "beta {beta} lam {lam}: {m} vs {want}");
        }
    }
}

#[test]
fn spectrally_negative_laplace_exponent() {
    // E exp(s Y_t) = exp(t s^alpha)
    for alpha in [1.3, 1.7, 2.0] {
        let s = SpectrallyNegativeSampler::new(&StableParams::from_alpha(alpha).unwrap());
        let xs = sample_vec(&McPlan::new(5, 200_000), |rng| (0.5 * s.sample(0.8, rng)).exp());
        let (m, sd) = mean_sd(&xs);
        let want = (0.8 * 0.5f64.powf(alpha)).exp();
        assert!((m - want).abs() < 4.0 * sd, "alpha {alpha}: {m} vs {want}");
    }
}

#[test]
fn positive_half_line_mass() {
    for alpha in [1.25, 1.6] {
        let s = SpectrallyNegativeSampler::new(&StableParams::from_alpha(alpha).unwrap());
        let xs = sample_vec(&McPlan::new(9, 200_000), |rng| s.sample_unit(rng));
        let p = xs.iter().filter(|x| **x >= 0.0).count() as f64 / xs.len() as f64;
        let sd = (p * (1.0 - p) / xs.len() as f64).sqrt();
        assert!((p - 1.0 / alpha).abs() < 4.0 * sd);
    }
}

#[test]
fn hitting_sampler_mean_and_law() {
    for beta in [0.3, 0.6, 0.85] {
        let h = HittingSampler::new(beta, 1e-6).unwrap();
        let xs = try_sample_vec(&McPlan::new(21, 20_000), |rng| h.sample(1.5, rng)).unwrap();
        let (m, sd) = mean_sd(&xs);
        let want = 1.5f64.powf(beta) / gamma_fn(1.0 + beta).unwrap();
        assert!((m - want).abs() < 4.0 * sd, "beta {beta}: {m} vs {want}");
    }
    // at beta = 1/2, P(E_t <= r) = erf(r / (2 sqrt t))
    let h = HittingSampler::new(0.5, 1e-6).unwrap();
    let xs = try_sample_vec(&McPlan::new(22, 20_000), |rng| h.sample(2.0, rng)).unwrap();
    let ks = ks_one_sample(&xs, |r| if r > 0.0 { libm::erf(r / (2.0 * 2f64.sqrt())) } else { 0.0 }).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn inverse_methods_agree_away_from_half() {
    let hit = InverseSampler::new(0.8, InverseMethod::hitting()).unwrap();
    let sup = InverseSampler::new(0.8, InverseMethod::Supremum { n_steps: 2000 }).unwrap();
    let a = try_sample_vec(&McPlan::new(1, 20_000), |rng| hit.sample(1.0, rng)).unwrap();
    let b = try_sample_vec(&McPlan::new(2, 20_000), |rng| sup.sample(1.0, rng)).unwrap();
    let ks = ks_two_sample(&a, &b).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
    assert!(InverseSampler::new(0.3, InverseMethod::Supremum { n_steps: 10 }).is_err());
}

#[test]
fn ks_statistic_extremes() {
    let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
    let same = ks_two_sample(&a, &a).unwrap();
    assert_eq!(same.statistic, 0.0);
    assert!(same.p_value > 0.999);
    let b: Vec<f64> = (0..100).map(|i| 1000.0 + i as f64).collect();
    let apart = ks_two_sample(&a, &b).unwrap();
    assert_eq!(apart.statistic, 1.0);
    assert!(apart.p_value < 1e-20);
    assert!(ks_two_sample(&[], &a).is_err());
    assert!((kolmogorov_survival(1.36) - 0.0494).abs() < 1e-3);
}

#[test]
fn ks_uniform_one_sample() {
    let mut rng = RngStream::new(3, 0);
    let xs: Vec<f64> = (0..5000).map(|_| rng.uniform_open()).collect();
    let ks = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
    assert!(ks.p_value > 0.01);
    let bad = ks_one_sample(&xs, |x| (x * x).clamp(0.0, 1.0)).unwrap();
    assert!(bad.p_value < 1e-6);
}

#[test]
fn reflection_identity_at_low_alpha() {
    let p = StableParams::from_alpha(1.2).unwrap();
    let est = reflection_identity_levels(&p, 1.0, &[0.5, 1.0, 2.0], 2000, &McPlan::new(31, 50_000)).unwrap();
    for e in &est {
        assert!(e.z_score().abs() < 4.0, "{e:?}");
        assert!(e.positive > 0.0);
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_and_sequential_agree_bitwise() {
    use fracstable::par::{map_chunks_par, map_chunks_seq};
    let p = StableParams::from_alpha(1.5).unwrap();
    let plan = McPlan::new(77, 10_000);
    let f = |rng: &mut RngStream, len: usize| {
        (0..len)
            .map(|_| simulate_extremes(&p, 1.0, 50, rng).unwrap().reflected_terminal(0.0))
            .collect::<Vec<f64>>()
    };
    assert_eq!(map_chunks_seq(&plan, f), map_chunks_par(&plan, f));
}

#[test]
fn streams_are_reproducible() {
    let plan = McPlan::new(5, 3000);
    let s = SubordinatorSampler::new(0.7).unwrap();
    let a = sample_vec(&plan, |rng| s.sample_unit(rng));
    let b = sample_vec(&plan, |rng| s.sample_unit(rng));
    assert_eq!(a, b);
    let c = sample_vec(&McPlan::new(6, 3000), |rng| s.sample_unit(rng));
    assert_ne!(a, c);
}

#[test]
fn path_csv_layout() {
    let p = StableParams::from_alpha(1.5).unwrap();
    let path = simulate_reflected_path(&p, 1.0, 4, &mut RngStream::new(1, 2)).unwrap();
    let mut buf = Vec::new();
    path.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next(), Some("t,value"));
    assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
    assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reflected_path_is_skorokhod_map(alpha in 1.05f64..2.0, seed in 0u64..1000, x0 in 0.0f64..2.0) {
        let p = StableParams::from_alpha(alpha).unwrap();
        let y = simulate_y_path(&p, 1.0, 200, &mut RngStream::new(seed, 0)).unwrap();
        let z = simulate_reflected_path_from(&p, x0, 1.0, 200, &mut RngStream::new(seed, 0)).unwrap();
        let mut inf = 0.0f64;
        for (yv, zv) in y.values.iter().zip(&z.values) {
            inf = inf.min(x0 + yv);
            prop_assert!(*zv >= 0.0);
            prop_assert!((zv - (x0 + yv - inf)).abs() < 1e-12 * (1.0 + zv.abs()));
        }
    }

    #[test]
    fn monotone_processes(alpha in 1.05f64..2.0, seed in 0u64..1000) {
        let p = StableParams::from_alpha(alpha).unwrap();
        let mut rng = RngStream::new(seed, 1);
        let s = simulate_supremum_path(&p, 2.0, 100, &mut rng).unwrap();
        let d = simulate_subordinator_path(&p, 2.0, 100, &mut rng).unwrap();
        prop_assert!(s.values.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(d.values.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(s.tag, ProcessTag::S);
        prop_assert_eq!(d.tag, ProcessTag::D);
    }

    #[test]
    fn hitting_draws_are_positive_and_scale(beta in 0.2f64..0.95, seed in 0u64..100) {
        let h = HittingSampler::new(beta, 1e-6).unwrap();
        let a = h.sample(1.0, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert!(a > 0.0 && a.is_finite());
    }
}
