use std::f64::consts::{PI, SQRT_2};

use antizeno_core::measurement::MeasurementModel;
use antizeno_core::model::ModelParams;
use antizeno_core::par::Execution;
use antizeno_core::protocol::{t1_values, two_period_schedule, SurvivalSimulator, T1Sampling};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn ensemble(c: &mut Criterion) {
    let sim = SurvivalSimulator::new(&ModelParams::resonant(1.0, 1.0, 40).unwrap()).unwrap();
    let base = two_period_schedule(2.0 * PI, SQRT_2, 8).unwrap();
    let mut group = c.benchmark_group("ensemble_20_runs");
    group.sample_size(10);
    for eps in [0.0, 0.2] {
        let m = MeasurementModel::new(eps).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, eps), &m, |b, &m| {
                b.iter(|| sim.ensemble(&base, m, 0.2 * PI, 20, 42, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let sim = SurvivalSimulator::new(&ModelParams::resonant(1.0, 1.0 / 3.0, 40).unwrap()).unwrap();
    let periods = t1_values(0.2 * PI, 10.0 * PI, 100, T1Sampling::Uniform, 0).unwrap();
    let m = MeasurementModel::projective();
    let mut group = c.benchmark_group("t1_sweep_100");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| sim.sweep_t1(8, &periods, SQRT_2, m, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ensemble, sweep);
criterion_main!(benches);
