use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use partrand_bench::{
    antichain_rule, deep_set, geometric_witness, prefix_set, starred_measure, weight_measure,
    weight_rule,
};
use partrand_core::duality::{sqrt_premeasure_eval, sqrt_rule_member};
use partrand_core::strings::BinaryString;
use partrand_core::witness::{generate_witness, WitnessStrategy};

fn measure_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("measure-eval");
    let f = deep_set();
    let dwt = weight_measure();
    group.bench_function("dwt-24", |b| b.iter(|| dwt.eval(black_box(&f)).unwrap()));
    let star = starred_measure();
    let small = prefix_set(6);
    group.bench_function("star-6", |b| b.iter(|| star.eval(black_box(&small)).unwrap()));
    group.finish();
}

fn sqrt_operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("sqrt");
    let kp = weight_rule();
    let ka = antichain_rule();
    for n in [2usize, 4, 6] {
        let f = prefix_set(n);
        group.bench_with_input(BenchmarkId::new("premeasure-kp", n), &f, |b, f| {
            b.iter(|| sqrt_premeasure_eval(&kp, black_box(f), 32).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("premeasure-ka", n), &f, |b, f| {
            b.iter(|| sqrt_premeasure_eval(&ka, black_box(f), 32).unwrap())
        });
    }
    let m = weight_measure();
    let witness = geometric_witness(256);
    group.bench_function("rule-member-256", |b| {
        b.iter(|| sqrt_rule_member(&m, black_box(&witness)).unwrap())
    });
    group.finish();
}

fn witness_generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("gen-witness");
    group.sample_size(20);
    let zeros = BinaryString::repeated(false, 4096);
    group.bench_function("runlength-4096", |b| {
        b.iter(|| generate_witness(black_box(&zeros), &WitnessStrategy::RunLength).unwrap())
    });
    let alternating =
        BinaryString::from_bits((0..4096).map(|i| i % 2 == 1).collect::<Vec<bool>>());
    group.bench_function("blockcode2-4096", |b| {
        b.iter(|| {
            generate_witness(black_box(&alternating), &WitnessStrategy::BlockCode { block: 2 })
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, measure_eval, sqrt_operators, witness_generation);
criterion_main!(benches);
