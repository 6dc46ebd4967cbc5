use criterion::{black_box, criterion_group, criterion_main, Criterion};
use solab_core::constructions::{alternating, symmetric};
use solab_core::{
    iota_count, pins_exact, pins_montecarlo, totient_sieve, CosetParity, CosetSpec, GroupHandle,
    Permutation,
};

fn bench_stabilizer_chain(c: &mut Criterion) {
    let generators = symmetric(8).unwrap().generators().to_vec();
    c.bench_function("stabilizer_chain_sym8", |b| {
        b.iter(|| {
            let group = GroupHandle::new(black_box(generators.clone())).unwrap();
            black_box(group.order())
        })
    });
    let alt_generators = alternating(9).unwrap().generators().to_vec();
    c.bench_function("stabilizer_chain_alt9", |b| {
        b.iter(|| {
            let group = GroupHandle::new(black_box(alt_generators.clone())).unwrap();
            black_box(group.order())
        })
    });
}

fn bench_insolubility_scan(c: &mut Criterion) {
    let a = Permutation::from_cycles(5, &[vec![0, 1], vec![2, 3]]).unwrap();
    let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
    c.bench_function("pins_exact_alt5", |b| {
        b.iter(|| black_box(pins_exact(&a, &coset, 1_000).unwrap()))
    });
    c.bench_function("pins_montecarlo_alt5_1000", |b| {
        b.iter(|| black_box(pins_montecarlo(&a, &coset, 1_000, 7, 0.95).unwrap()))
    });
}

fn bench_totient_sieve(c: &mut Criterion) {
    c.bench_function("totient_sieve_1e6", |b| {
        b.iter(|| black_box(totient_sieve(black_box(1_000_000)).unwrap()))
    });
}

fn bench_iota_scan(c: &mut Criterion) {
    c.bench_function("iota_count_omega7", |b| {
        b.iter(|| black_box(iota_count(black_box(7), black_box(3)).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_stabilizer_chain,
    bench_insolubility_scan,
    bench_totient_sieve,
    bench_iota_scan
);
criterion_main!(benches);
