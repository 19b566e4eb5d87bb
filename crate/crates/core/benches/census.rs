use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use trigonal_core::census::{profile_range, Histogram, ProfileEngine, Strategy};
use trigonal_core::par::Exec;
use trigonal_core::plane::{Family, FamilyKind};
use trigonal_core::sieve::Sieve;

fn policies() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::default())]
}

fn census_blocks(c: &mut Criterion) {
    let family = Family::new(FamilyKind::Split, 3).unwrap();
    let engine = ProfileEngine::new(3, Strategy::Eliminate).unwrap();
    let mut group = c.benchmark_group("census_q3_eliminate_4096");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let parts = exec.map(16, |i| {
                    let lo = 1_000_000 + i as u64 * 256;
                    profile_range(&family, &engine, lo..lo + 256).unwrap()
                });
                let mut total = Histogram::default();
                parts.iter().for_each(|h| total.merge(h));
                black_box(total)
            })
        });
    }
    group.finish();

    let family = Family::new(FamilyKind::Cusp, 2).unwrap();
    let engine = ProfileEngine::new(2, Strategy::Scan).unwrap();
    let mut group = c.benchmark_group("census_q2_scan_512");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                black_box(exec.map(8, |i| profile_range(&family, &engine, i as u64 * 64..(i as u64 + 1) * 64).unwrap()))
            })
        });
    }
    group.finish();
}

fn sieve_sums(c: &mut Criterion) {
    let sieve = Sieve::new(Family::new(FamilyKind::Split, 3).unwrap()).unwrap();
    let mut group = c.benchmark_group("sieve_q3_split_w4");
    group.sample_size(10);
    for (name, exec) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(sieve.sum(4, exec).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, census_blocks, sieve_sums);
criterion_main!(benches);
