//! Benchmarks for the hot paths: division-free characteristic polynomials,
//! fraction-free determinants, BFS closure, the two Kronecker enumerations,
//! ball expansion, and the characteristic-p order algorithm.

use criterion::{criterion_group, criterion_main, Criterion};
use matfin::building::{self, LatticeVertex};
use matfin::exactnum::{Field, Scalar};
use matfin::grouporder;
use matfin::kronecker;
use matfin::SquareMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn random_q_matrix(rng: &mut ChaCha8Rng, d: usize) -> SquareMatrix {
    let q = Field::Q;
    let entries = (0..d * d)
        .map(|_| Scalar::from_rational(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9)))
        .collect();
    SquareMatrix::new(q, d, entries).expect("shape")
}

fn random_fp_matrix(rng: &mut ChaCha8Rng, p: u64, d: usize) -> SquareMatrix {
    let field = Field::Fp(p);
    loop {
        let entries = (0..d * d)
            .map(|_| Scalar::from_integer(&field, rng.gen_range(0..p) as i64))
            .collect();
        let m = SquareMatrix::new(field, d, entries).expect("shape");
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn bench_char_poly(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m6 = random_q_matrix(&mut rng, 6);
    c.bench_function("char_poly_berkowitz_q_d6", |b| {
        b.iter(|| black_box(m6.char_poly()))
    });
    let f = Field::FpT(3);
    let t = Scalar::parse("t", &f).expect("parses");
    let rows = vec![
        vec![t.clone(), Scalar::one(&f), Scalar::zero(&f)],
        vec![Scalar::zero(&f), t.inv().expect("nonzero"), Scalar::one(&f)],
        vec![Scalar::one(&f), Scalar::zero(&f), t.clone()],
    ];
    let mt = SquareMatrix::from_rows(f, rows).expect("shape");
    c.bench_function("char_poly_berkowitz_fpt_d3", |b| {
        b.iter(|| black_box(mt.char_poly()))
    });
}

fn bench_determinant(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m8 = random_q_matrix(&mut rng, 8);
    c.bench_function("determinant_bareiss_q_d8", |b| {
        b.iter(|| black_box(m8.determinant()))
    });
}

fn bench_closure(c: &mut Criterion) {
    let f3 = Field::Fp(3);
    let s = SquareMatrix::from_int_rows(f3, &[&[0, -1], &[1, 0]]).expect("shape");
    let t = SquareMatrix::from_int_rows(f3, &[&[1, 1], &[0, 1]]).expect("shape");
    c.bench_function("closure_sl2_f3", |b| {
        b.iter(|| black_box(grouporder::group_closure(&[s.clone(), t.clone()], 200, false)))
    });
}

fn bench_kronecker(c: &mut Criterion) {
    c.bench_function("kronecker_products_d6", |b| {
        b.iter(|| black_box(kronecker::enumerate_by_products(6)))
    });
    c.bench_function("kronecker_bounds_d4", |b| {
        b.iter(|| black_box(kronecker::enumerate_by_bounds(4)))
    });
}

fn bench_building(c: &mut Criterion) {
    let v = LatticeVertex::standard(3, 2).expect("prime");
    c.bench_function("ball_p3_d2_r3", |b| {
        b.iter(|| black_box(building::ball(&v, 3)))
    });
    let v3 = LatticeVertex::standard(3, 3).expect("prime");
    c.bench_function("neighbors_p3_d3", |b| {
        b.iter(|| black_box(building::neighbors(&v3)))
    });
}

fn bench_order(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random_fp_matrix(&mut rng, 5, 4);
    c.bench_function("order_char_p_f5_d4", |b| {
        b.iter(|| black_box(grouporder::order_char_p(&m)))
    });
}

criterion_group!(
    benches,
    bench_char_poly,
    bench_determinant,
    bench_closure,
    bench_kronecker,
    bench_building,
    bench_order
);
criterion_main!(benches);
