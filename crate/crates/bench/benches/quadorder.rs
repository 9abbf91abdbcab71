// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;

use quadorder::abelian::davenport_bruteforce;
use quadorder::arith::factor;
use quadorder::classnum::class_number_with_bound;
use quadorder::residue::{ell, precl_structure};
use quadorder::{AbelianGroup, QuadField};

fn bench_factor(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor");
    // 2^64 + 1 = 274177 · 67280421310721
    let fermat = (BigUint::from(1u32) << 64u32) + 1u32;
    group.bench_function("2^64+1", |b| b.iter(|| factor(black_box(&fermat)).unwrap()));
    let semiprime = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
    group.bench_function("semiprime_1e18", |b| b.iter(|| factor(black_box(&semiprime)).unwrap()));
    group.finish();
}

fn bench_precl(c: &mut Criterion) {
    let mut group = c.benchmark_group("precl_structure");
    for (d, f) in [(2, 1_000), (-1, 3_600), (5, 9_699)] {
        group.bench_with_input(BenchmarkId::new(format!("D={d}"), f), &f, |b, &f| {
            // a fresh field per iteration, so the prime-power cache starts cold
            b.iter(|| {
                let k = QuadField::new(d).unwrap();
                precl_structure(&k, black_box(f)).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_ell(c: &mut Criterion) {
    let k = QuadField::new(2).unwrap();
    c.bench_function("ell/D=2/f=99991", |b| b.iter(|| ell(&k, black_box(99_991)).unwrap()));
}

fn bench_davenport(c: &mut Criterion) {
    let mut group = c.benchmark_group("davenport_bruteforce");
    group.sample_size(10);
    for factors in [vec![2, 2, 2, 2], vec![2, 12], vec![3, 9], vec![6, 6]] {
        let g = AbelianGroup::new(factors).unwrap();
        group.bench_function(g.to_string(), |b| b.iter(|| davenport_bruteforce(black_box(&g)).unwrap()));
    }
    group.finish();
}

fn bench_class_number(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_number");
    for d in [-99_991i64, 99_991] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| {
                let k = QuadField::new(d).unwrap();
                class_number_with_bound(&k, 1_000_000).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_factor, bench_precl, bench_ell, bench_davenport, bench_class_number);
criterion_main!(benches);
