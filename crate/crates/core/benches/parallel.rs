use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracstable::par::{map_chunks_seq, McPlan};
use fracstable::stochastic::{simulate_extremes, SpectrallyNegativeSampler};
use fracstable::StableParams;

fn reflected_terminals(c: &mut Criterion) {
    let p = StableParams::from_alpha(1.5).unwrap();
    let mut g = c.benchmark_group("reflected_terminal");
    g.sample_size(10);
    for paths in [4096usize, 16384] {
        let plan = McPlan::new(7, paths);
        let work = |rng: &mut _, len: usize| {
            (0..len)
                .map(|_| simulate_extremes(&p, 1.0, 200, rng).unwrap().reflected_terminal(0.0))
                .sum::<f64>()
        };
        g.bench_with_input(BenchmarkId::new("sequential", paths), &plan, |b, plan| {
            b.iter(|| black_box(map_chunks_seq(plan, work)))
        });
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("parallel", paths), &plan, |b, plan| {
            b.iter(|| black_box(fracstable::par::map_chunks_par(plan, work)))
        });
    }
    g.finish();
}

fn increments(c: &mut Criterion) {
    let s = SpectrallyNegativeSampler::new(&StableParams::from_alpha(1.8).unwrap());
    let plan = McPlan::new(3, 1 << 18);
    let work = |rng: &mut _, len: usize| (0..len).map(|_| s.sample_unit(rng)).sum::<f64>();
    let mut g = c.benchmark_group("stable_increments");
    g.bench_function("sequential", |b| b.iter(|| black_box(map_chunks_seq(&plan, work))));
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| b.iter(|| black_box(fracstable::par::map_chunks_par(&plan, work))));
    g.finish();
}

criterion_group!(benches, reflected_terminals, increments);
criterion_main!(benches);
