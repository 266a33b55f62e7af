//! Parallel vs sequential throughput of the grid-shaped workloads: Green
//! evaluation over a parameter grid, the PCF grid-Newton oracle, and
//! Per_m(lambda) node evaluation. `exec::map` uses the rayon pool when the
//! `parallel` feature (default) is on; `exec::map_seq` is the single-thread
//! reference, so one build compares both paths.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use cubicdyn::dynamics::{exact_period_points, multiplier_at, CubicParam};
use cubicdyn::exec;
use cubicdyn::green::g0g1g;
use cubicdyn::pcf::{orbit_relation, NewtonSystem};

fn green_grid_points(n: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            pts.push((
                -3.0 + 6.0 * (i as f64 + 0.5) / n as f64,
                -3.0 + 6.0 * (j as f64 + 0.5) / n as f64,
            ));
        }
    }
    pts
}

fn green_eval(pt: &(f64, f64)) -> f64 {
    let p = CubicParam::new(Complex64::new(pt.0, 0.3), Complex64::new(pt.1, -0.2));
    g0g1g(&p, 1e-10).map(|(_, _, g)| g.value).unwrap_or(f64::NAN)
}

fn bench_green_grid(c: &mut Criterion) {
    let pts = green_grid_points(48);
    let mut group = c.benchmark_group("green_grid_48x48");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(&pts, green_eval)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(&pts, green_eval)))
    });
    group.finish();
}

fn bench_pcf_oracle(c: &mut Criterion) {
    let r0 = orbit_relation(0, 0, 1).unwrap();
    let r1 = orbit_relation(1, 0, 1).unwrap();
    let sys = NewtonSystem::new(&r0.poly, &r1.poly);
    let seeds: Vec<(f64, f64)> = green_grid_points(32);
    let run = |pt: &(f64, f64)| {
        sys.refine(Complex64::new(pt.0, pt.1), Complex64::new(0.7, -0.4))
            .map(|(cv, av)| cv.norm() + av.norm())
            .unwrap_or(0.0)
    };
    let mut group = c.benchmark_group("pcf_newton_grid_32x32");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| black_box(exec::map(&seeds, run))));
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(&seeds, run)))
    });
    group.finish();
}

fn bench_perm_nodes(c: &mut Criterion) {
    let lambda = Complex64::ZERO;
    let nodes: Vec<(f64, f64)> = (0..64)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / 64.0 + 0.12;
            (1.5 * theta.cos(), 1.5 * theta.sin())
        })
        .collect();
    let eval = |pt: &(f64, f64)| {
        let param = CubicParam::new(Complex64::new(0.4, 0.1), Complex64::new(pt.0, pt.1));
        let points = exact_period_points(&param, 2).unwrap_or_default();
        let mut acc = Complex64::ONE;
        for z in points {
            acc *= lambda - multiplier_at(&param, z, 2);
        }
        acc.norm()
    };
    let mut group = c.benchmark_group("perm_resultant_nodes_m2");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| black_box(exec::map(&nodes, eval))));
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(&nodes, eval)))
    });
    group.finish();
}

criterion_group!(benches, bench_green_grid, bench_pcf_oracle, bench_perm_nodes);
criterion_main!(benches);
