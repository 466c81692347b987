//! Sequential against parallel execution for the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hagedorn::verify::crosscheck_sweep;
use hagedorn::{build_recurrence, eval_grid, generate_params, gram_matrix, Exec, GridSpec, Method, MultiIndex};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn gram(c: &mut Criterion) {
    let params = generate_params(1, 2, 1.0).unwrap();
    let order = 6;
    let table = build_recurrence(&params, order).unwrap();
    let mut group = c.benchmark_group("gram_d2_k6");
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gram_matrix(&params, order, order as usize + 3, &table, exec).unwrap())
        });
    }
    group.finish();
}

fn grid(c: &mut Criterion) {
    let params = generate_params(2, 2, 1.0).unwrap();
    let table = build_recurrence(&params, 4).unwrap();
    let k = MultiIndex::new(vec![3, 1]);
    let spec = GridSpec::parse("-3:3:200,-3:3:200").unwrap();
    let mut group = c.benchmark_group("eval_grid_200x200");
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| eval_grid(&params, black_box(&k), &table, &spec, exec).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let seeds: Vec<u64> = (1..=16).collect();
    let methods = [Method::Recurrence, Method::Generating, Method::Rodrigues];
    let mut group = c.benchmark_group("crosscheck_sweep_d3_k4");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| crosscheck_sweep(black_box(&seeds), 3, 4, &methods, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, gram, grid, sweep);
criterion_main!(benches);
