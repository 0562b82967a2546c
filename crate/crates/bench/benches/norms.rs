use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use crossnorm_bench::{hexagon, tensor};
use crossnorm_core::fiber::gauge_lp;
use crossnorm_core::rational::Rational;
use crossnorm_core::theorems::{verify, TheoremId};
use crossnorm_core::{Crossnorm, NormDescriptor};

fn projective(c: &mut Criterion) {
    let mut group = c.benchmark_group("projective");
    for n in [2, 3] {
        let t = tensor(1, NormDescriptor::linf(n), NormDescriptor::l1(n));
        group.bench_with_input(BenchmarkId::new("linf_l1", n), &t, |b, t| {
            b.iter(|| t.projective_norm().unwrap())
        });
    }
    let t = tensor(1, hexagon(), hexagon());
    group.bench_function("hexagon", |b| b.iter(|| t.projective_norm().unwrap()));
    let t = tensor(4, NormDescriptor::l2(3), NormDescriptor::l2(3));
    group.bench_function("l2_nuclear_4_atoms", |b| {
        b.iter(|| t.norm(Crossnorm::Pi).unwrap())
    });
    group.finish();
}

fn injective(c: &mut Criterion) {
    let mut group = c.benchmark_group("injective");
    for n in [2, 3] {
        let t = tensor(1, NormDescriptor::l1(n), NormDescriptor::l1(n));
        group.bench_with_input(BenchmarkId::new("l1_l1", n), &t, |b, t| {
            b.iter(|| t.injective_norm().unwrap())
        });
    }
    let t = tensor(1, hexagon(), NormDescriptor::l2(2));
    group.bench_function("hexagon_l2", |b| b.iter(|| t.injective_norm().unwrap()));
    group.finish();
}

fn gauge(c: &mut Criterion) {
    let q = |a: i64| Rational::from_integer(a.into());
    let dictionary: Vec<Vec<Rational>> = (0..8)
        .map(|i| vec![q(i % 3 - 1), q(i % 5 - 2), q(1 - i % 2)])
        .collect();
    let target = vec![q(3), q(-2), q(5)];
    c.bench_function("gauge_lp_8x3", |b| {
        b.iter(|| gauge_lp(black_box(&dictionary), black_box(&target)).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for id in [TheoremId::PiElem, TheoremId::Vv, TheoremId::QuotTensorPi] {
        group.bench_function(id.code(), |b| b.iter(|| verify(id, 1, 16, None)));
    }
    group.finish();
}

criterion_group!(benches, projective, injective, gauge, suites);
criterion_main!(benches);
