use std::hint::black_box;

use bmoalab::quadrature::disc_integrate;
use bmoalab::semigroup::{flow, Semigroup, DEFAULT_TOL};
use bmoalab::spaces::{local_seminorm_i, SpaceParam};
use bmoalab::volterra::{apply_tg, VolterraOp};
use bmoalab::{AnalyticFn, GridSpec};
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

fn quadrature(c: &mut Criterion) {
    let f = AnalyticFn::log_recip_one_minus(Complex64::new(1.0, 0.0)).unwrap();
    for (n, m) in [(32, 64), (64, 128)] {
        let grid = GridSpec::new(n, m);
        c.bench_function(&format!("disc_integrate |f'|^2 {n}x{m}"), |b| {
            b.iter(|| disc_integrate(|q| f.deriv_at(q.z).norm_sqr() * q.one_minus_r2, black_box(&grid)).unwrap())
        });
    }
}

fn seminorm(c: &mut Criterion) {
    let f = AnalyticFn::monomial(3);
    let p = SpaceParam::new(1.5).unwrap();
    let grid = GridSpec::new(32, 64);
    let a = Complex64::new(0.3, 0.4);
    c.bench_function("local_seminorm_i z^3 p=1.5", |b| {
        b.iter(|| local_seminorm_i(&f, p, black_box(a), &grid).unwrap())
    });
}

fn flows(c: &mut Criterion) {
    let g = AnalyticFn::identity()
        .scale(Complex64::new(-1.0, 0.0))
        .add(&AnalyticFn::monomial(2).scale(Complex64::new(-0.5, 0.0)));
    let sg = Semigroup::new(g, Complex64::new(0.0, 0.0), None, "G=-z(1+z/2)").unwrap();
    let z0 = Complex64::new(0.5, 0.3);
    c.bench_function("flow ode t=1", |b| b.iter(|| flow(&sg, black_box(z0), 1.0, DEFAULT_TOL).unwrap()));
}

fn volterra(c: &mut Criterion) {
    let op = VolterraOp::new(AnalyticFn::log_recip_one_minus(Complex64::new(1.0, 0.0)).unwrap());
    let f = AnalyticFn::monomial(2);
    let z = Complex64::new(0.6, -0.5);
    c.bench_function("apply_tg 64 nodes", |b| b.iter(|| apply_tg(&op, &f, black_box(z), 64).unwrap()));
}

criterion_group!(benches, quadrature, seminorm, flows, volterra);
criterion_main!(benches);
