use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;

use towerforge_bench::{f3_case, CLASS_CASES, FACTOR_TARGETS};
use towerforge_core::classminus::LValueKernel;
use towerforge_core::{factorize, h_minus, mult_order, HMinusOptions, ResidueUnitGroup};

fn class_numbers(c: &mut Criterion) {
    let mut g = c.benchmark_group("h_minus");
    g.sample_size(20);
    for (prime, m) in CLASS_CASES {
        let (field, prime_poly, m) = f3_case(prime, m);
        g.bench_with_input(BenchmarkId::new(prime, m), &m, |b, &m| {
            b.iter(|| h_minus(&field, &prime_poly, m, &HMinusOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn l_value_kernel(c: &mut Criterion) {
    let (field, prime, m) = f3_case("t^4+2*t+2", 1);
    let group = ResidueUnitGroup::new(&field, &prime, m).unwrap();
    let kernel = LValueKernel::new(&group);
    let chi = group
        .characters()
        .into_iter()
        .find(|c| c.is_odd())
        .expect("odd character exists");
    c.bench_function("l_value/t^4+2*t+2", |b| {
        b.iter(|| kernel.l_value(black_box(&chi)).unwrap())
    });
}

fn integers(c: &mut Criterion) {
    let mut g = c.benchmark_group("zarith");
    for n in FACTOR_TARGETS {
        let n: BigUint = n.parse().unwrap();
        g.bench_with_input(BenchmarkId::new("factorize", &n), &n, |b, n| {
            b.iter(|| factorize(black_box(n)))
        });
    }
    let three = BigUint::from(3u32);
    let h: BigUint = "532611841".parse().unwrap();
    g.bench_function("mult_order/3 mod 532611841", |b| {
        b.iter(|| mult_order(black_box(&three), black_box(&h)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, class_numbers, l_value_kernel, integers);
criterion_main!(benches);
