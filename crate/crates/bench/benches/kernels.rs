use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use majlab_core::oracle::{Oracle, OracleP, Statistic};
use majlab_core::{
    bindiff_ge, compute_s_sets, parse_colors, rng, run, sample_adjacency, sample_gnp_with, step, Color, ColoringScheme,
    UpdateRule,
};

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for n in [1_000usize, 10_000] {
        let p = 10.0 / (n as f64).sqrt();
        let scheme = ColoringScheme::fixed_gap(0.0).unwrap();
        let g = sample_gnp_with(n, p, &scheme, &mut rng::split(1, 0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| step(black_box(g), UpdateRule::Standard))
        });
    }
    group.finish();
}

fn bench_run(c: &mut Criterion) {
    let scheme = ColoringScheme::fixed_gap(10.0).unwrap();
    let g = sample_gnp_with(2_000, 0.05, &scheme, &mut rng::split(2, 0)).unwrap();
    c.bench_function("run/n=2000", |b| {
        b.iter(|| run(black_box(&g), UpdateRule::Standard, 40))
    });
}

fn bench_sample(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_adjacency");
    for (n, p) in [(1_000usize, 0.1), (10_000, 0.01)] {
        group.bench_with_input(BenchmarkId::new(format!("p={p}"), n), &(n, p), |b, &(n, p)| {
            let mut stream = rng::split(3, 0);
            b.iter(|| sample_adjacency(n, p, &mut stream).unwrap())
        });
    }
    group.finish();
}

fn bench_bindiff(c: &mut Criterion) {
    c.bench_function("bindiff_ge/5000x5000", |b| {
        b.iter(|| bindiff_ge(black_box(5_000), black_box(5_000), 0.01, 3))
    });
}

fn bench_sets(c: &mut Criterion) {
    let scheme = ColoringScheme::fixed_gap(50.0).unwrap();
    let g = sample_gnp_with(5_000, 0.02, &scheme, &mut rng::split(4, 0)).unwrap();
    let ones: Vec<usize> = (0..g.n()).filter(|&v| g.color(v) == Color::One).take(2).collect();
    c.bench_function("compute_s_sets/n=5000", |b| {
        b.iter(|| compute_s_sets(black_box(&g), ones[0], ones[1]).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_winprob");
    group.sample_size(10);
    for colors in ["11122", "111122"] {
        let oracle = Oracle::new(colors.len(), parse_colors(colors).unwrap()).unwrap();
        let p = OracleP::parse("1/3", false).unwrap();
        let stat = Statistic::WinProb {
            color: Color::One,
            rule: UpdateRule::Standard,
            cap: None,
        };
        group.bench_with_input(BenchmarkId::from_parameter(colors), &oracle, |b, o| {
            b.iter(|| o.eval(&p, &stat).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_step,
    bench_run,
    bench_sample,
    bench_bindiff,
    bench_sets,
    bench_oracle
);
criterion_main!(benches);
