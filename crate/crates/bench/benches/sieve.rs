use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use valset::{gallagher_bound, gen_poly_values, gen_powers, sieve_primes, IntPoly};

fn bench_sieve(c: &mut Criterion) {
    let squares = gen_powers(2, 1_000_000).unwrap();
    let table = sieve_primes(10_000).unwrap();
    c.bench_function("gallagher_bound squares 10^6, Q 10^4", |b| {
        b.iter(|| gallagher_bound(black_box(&squares), table.primes()))
    });

    let shifted = IntPoly::from_coeffs(vec![
        (-1_000_000_000_000_000_000i64).into(),
        0.into(),
        0.into(),
        1.into(),
    ]);
    c.bench_function("gen_poly_values (x^3 - 10^18) window", |b| {
        b.iter(|| gen_poly_values(black_box(&shifted), 1_000_000).unwrap())
    });
}

criterion_group!(benches, bench_sieve);
criterion_main!(benches);
