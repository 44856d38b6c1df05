use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use phigamma::crys::force_delta_zero;
use phigamma::ops::{frobenius, phi_inverse_n, psi};
use phigamma::suites::random;
use phigamma::wach::{psi_fixed_kernel, wach_rank1};
use phigamma::{CrysRep, ModuleElement, PadicScalar, PsiOneElement};

const PREC: i64 = 40;

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("psi");
    for p in [3u32, 5] {
        let mut r = random::rng(1);
        let f = random::integral_poly(&mut r, p, 64, 24, PREC);
        let pf = frobenius(&f);
        g.bench_with_input(BenchmarkId::new("frobenius", p), &f, |b, f| b.iter(|| frobenius(black_box(f))));
        g.bench_with_input(BenchmarkId::new("psi", p), &pf, |b, f| b.iter(|| psi(black_box(f))));
    }
    g.finish();

    let mut g = c.benchmark_group("localize");
    for level in 1..=3u32 {
        let mut r = random::rng(2);
        let f = random::integral_poly(&mut r, 3, 32, 24, PREC);
        g.bench_with_input(BenchmarkId::new("phi_inverse_n", level), &f, |b, f| {
            b.iter(|| phi_inverse_n(level, black_box(f), 4, PREC).unwrap())
        });
    }
    g.finish();
}

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    for p in [3u32, 5] {
        let rep = CrysRep::cyclotomic(p, 1, PREC).unwrap();
        let mut r = random::rng(3);
        let x = ModuleElement::new(rep.twist, vec![random::psi_zero(&mut r, p, 3, 3 * p as u64, PREC)]);
        let f = force_delta_zero(&rep, &x, 2, PREC).unwrap();
        g.bench_with_input(BenchmarkId::new("solve_h2", p), &f, |b, f| {
            b.iter(|| PsiOneElement::solve(&rep, black_box(f), 2, 64, PREC).unwrap())
        });
    }
    g.finish();
}

fn wach(c: &mut Criterion) {
    let mut g = c.benchmark_group("wach");
    g.sample_size(10);
    for p in [3u32, 5] {
        let w = wach_rank1(p, 0, &PadicScalar::one(p, 16)).unwrap();
        g.bench_with_input(BenchmarkId::new("psi_fixed_kernel", p), &w, |b, w| b.iter(|| psi_fixed_kernel(black_box(w), 3, 40, 8).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, operators, solver, wach);
criterion_main!(benches);
