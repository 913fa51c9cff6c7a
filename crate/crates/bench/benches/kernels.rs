use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use formflux_bench::{bump_top_form, plane_one_form, unit_square};
use formflux_core::exterior::{exterior_derivative, wedge};
use formflux_core::geometry::{integrate, Quadrature};
use formflux_core::scenarios::{by_name, ScenarioParams};

fn forms(c: &mut Criterion) {
    let a = plane_one_form(1.0);
    let b = plane_one_form(-0.5);
    let x = [0.3, 0.7];
    c.bench_function("wedge_eval", |bench| {
        bench.iter(|| wedge(black_box(&a), black_box(&b)).unwrap().eval(&x))
    });
    c.bench_function("exterior_derivative", |bench| {
        bench.iter(|| exterior_derivative(black_box(&a)))
    });
}

fn integration(c: &mut Criterion) {
    let da = exterior_derivative(&plane_one_form(1.0));
    let square = unit_square();
    let q = Quadrature::default();
    c.bench_function("integrate_square", |bench| {
        bench.iter(|| integrate(black_box(&da), &square, &q).unwrap())
    });
    let boundary = square.boundary().unwrap();
    let a = plane_one_form(1.0);
    c.bench_function("integrate_boundary", |bench| {
        bench.iter(|| integrate(black_box(&a), &boundary, &q).unwrap())
    });
}

fn worldlines(c: &mut Criterion) {
    let s = by_name("example3", &ScenarioParams::default()).unwrap();
    let seed = s.seeds[0].clone();
    c.bench_function("worldline_example3", |bench| {
        bench.iter(|| s.worldline(black_box(&seed), 1e-3, 10_000).unwrap())
    });
}

fn currents(c: &mut Criterion) {
    let s = by_name("example5", &ScenarioParams::default()).unwrap();
    let setup = s.currents().unwrap();
    let q = Quadrature::default();
    c.bench_function("verify_example5", |bench| {
        bench.iter(|| setup.verify(4, black_box(7), &q).unwrap())
    });
    let t = bump_top_form(&[1.0, 1.0]);
    let square = unit_square();
    c.bench_function("integrate_bump", |bench| {
        bench.iter(|| integrate(black_box(&t), &square, &q).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = forms, integration, worldlines, currents
}
criterion_main!(benches);
