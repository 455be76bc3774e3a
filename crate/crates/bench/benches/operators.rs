use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hlsext_bench::{annulus_problem, axis_points};
use hlsext_core::quadrature::{polar_reduce_sphere_integral, polar_rule};
use hlsext_core::{c2_functional, extend_riesz, BoundaryFunction, DomainSpec};

fn polar_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("polar_reduce");
    for s in [0.5, 0.99, 0.9999] {
        let rule = polar_rule(s, 1.0, 24).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| polar_reduce_sphere_integral(3, 1.0, black_box(s), |d| 1.0 / d, &rule).unwrap())
        });
    }
    group.finish();
}

fn extension(c: &mut Criterion) {
    let f = BoundaryFunction::two_level(DomainSpec::annulus(3, 0.1).unwrap(), 2.0).unwrap();
    let mut pts = axis_points(3, 32);
    pts.retain(|x| x[0] > 0.1);
    c.bench_function("extend_riesz annulus constants", |b| {
        b.iter(|| pts.iter().map(|x| extend_riesz(&f, 2.0, black_box(x)).unwrap()).sum::<f64>())
    });
}

fn c2(c: &mut Criterion) {
    let d = DomainSpec::annulus(3, 0.1).unwrap();
    c.bench_function("c2_functional n=3", |b| b.iter(|| c2_functional(black_box(&d)).unwrap()));
}

fn el_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("el_step");
    for nodes in [16, 64] {
        let (problem, f) = annulus_problem(3, 0.05, 5.9, nodes).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &f, |b, f| {
            b.iter(|| problem.step(black_box(f)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, polar_reduce, extension, c2, el_step);
criterion_main!(benches);
