//! Microbenchmarks for the hot paths: closed-form equilibria, the
//! grid-seeded numeric oracle, stability classification, trajectory
//! propagation, and region grids with contour extraction.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hill4bp::equilibria::{equilibrium_points, numeric_equilibria, spectral_decomposition};
use hill4bp::integrate::{propagate, HillDynamics};
use hill4bp::regions::{contours, region_grid_limit};
use hill4bp::stability::{classify, critical_mass};
use hill4bp::PointLabel;
use hill4bp_bench::{bench_mu, bench_orbit};

fn bench_equilibria(c: &mut Criterion) {
    let mu = bench_mu();
    c.bench_function("spectral_decomposition", |b| {
        b.iter(|| spectral_decomposition(black_box(mu)))
    });
    c.bench_function("equilibrium_points_closed_form", |b| {
        b.iter(|| equilibrium_points(black_box(mu)).unwrap())
    });
    c.bench_function("numeric_equilibria_default_grid", |b| {
        b.iter(|| numeric_equilibria(black_box(mu)).unwrap())
    });
}

fn bench_stability(c: &mut Criterion) {
    let mu = bench_mu();
    let l1 = hill4bp::equilibria::libration_point(mu, PointLabel::L1).unwrap();
    c.bench_function("classify_l1", |b| {
        b.iter(|| classify(black_box(l1), mu).unwrap())
    });
    c.bench_function("critical_mass_1e-9", |b| {
        b.iter(|| critical_mass(black_box(1e-9)).unwrap())
    });
}

fn bench_propagation(c: &mut Criterion) {
    let (mu, start, settings) = bench_orbit();
    let dynamics = HillDynamics::new(mu);
    c.bench_function("propagate_span_10", |b| {
        b.iter(|| propagate(&dynamics, [0.0, 10.0], black_box(start), &settings).unwrap())
    });
}

fn bench_regions(c: &mut Criterion) {
    let mu = bench_mu();
    let level = 4.0675;
    c.bench_function("region_grid_200x200", |b| {
        b.iter(|| {
            region_grid_limit(black_box(mu), level, [-2.0, 2.0], [-2.0, 2.0], 200, 200).unwrap()
        })
    });
    let grid = region_grid_limit(mu, level, [-2.0, 2.0], [-2.0, 2.0], 200, 200).unwrap();
    c.bench_function("contours_200x200", |b| b.iter(|| contours(black_box(&grid))));
}

criterion_group!(
    benches,
    bench_equilibria,
    bench_stability,
    bench_propagation,
    bench_regions
);
criterion_main!(benches);
