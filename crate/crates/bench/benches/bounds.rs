use criterion::{criterion_group, criterion_main, Criterion};

use ramsey_bench::q;
use ramsey_core::bounds::{book_frontier_finite, cor_easy_bound, crossover_root, main_exponent_bound, main_beta, optimal_p, thm_easy_bound};

fn evaluators(c: &mut Criterion) {
    let p = optimal_p(100, 60).unwrap();
    c.bench_function("thm_easy_bound", |b| b.iter(|| thm_easy_bound(100, 60, &p, 128).unwrap()));
    c.bench_function("cor_easy_bound", |b| b.iter(|| cor_easy_bound(100, 60, 128).unwrap()));
    c.bench_function("main_exponent_bound", |b| b.iter(|| main_exponent_bound(100, 100, &main_beta(), 128).unwrap()));
    c.bench_function("book_frontier_finite/r=2^20", |b| {
        b.iter(|| book_frontier_finite(&q(3, 5), &q(1, 5), 1 << 20, 128).unwrap())
    });
    c.bench_function("crossover_root", |b| b.iter(|| crossover_root(128).unwrap()));
}

criterion_group!(benches, evaluators);
criterion_main!(benches);
