use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tsgn_bench::{dense_set, etherg1};
use tsgn_core::features::FeatureVector;
use tsgn_core::{
    evaluate, handcrafted_features, EvalOptions, FeatureMatrix, ForestConfig, Variant,
};

fn builders(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    for n in [200, 600] {
        let set = dense_set(n, 2);
        for v in Variant::ALL {
            group.bench_with_input(BenchmarkId::new(v.short_name(), n), &set, |b, set| {
                b.iter(|| {
                    for g in set {
                        black_box(v.build(g).unwrap());
                    }
                })
            });
        }
    }
    group.finish();
}

fn features(c: &mut Criterion) {
    let set = dense_set(200, 1);
    let mut group = c.benchmark_group("features");
    group.sample_size(20);
    group.bench_function("tn", |b| {
        b.iter(|| handcrafted_features(black_box(&set[0])).unwrap())
    });
    for v in Variant::ALL {
        let mapped = v.build(&set[0]).unwrap();
        group.bench_function(v.short_name(), |b| {
            b.iter(|| handcrafted_features(black_box(&mapped)).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let m = etherg1();
    let tn: Vec<FeatureVector> = m
        .graphs
        .iter()
        .map(|g| handcrafted_features(g).unwrap())
        .collect();
    let tn = FeatureMatrix::from_vectors(&tn, m.labels()).unwrap();
    let cfg = ForestConfig {
        seed: 7,
        ..Default::default()
    };
    let opts = EvalOptions {
        n_repeats: 5,
        ..Default::default()
    };
    let mut group = c.benchmark_group("evaluate");
    group.sample_size(10);
    group.bench_function("etherg1_tn_5_repeats", |b| {
        b.iter(|| evaluate(&tn, &cfg, &opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, builders, features, evaluation);
criterion_main!(benches);
