use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use posmap::{
    block_positivity_min, falsify_dual_membership, is_positive_map, lambda_mu, random_sp_k,
    reduction_map, tensor, Execution, MappingCone, SearchConfig,
};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn config(execution: Execution) -> SearchConfig {
    SearchConfig {
        execution,
        ..SearchConfig::with_seed(1)
    }
}

fn product_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("block_positivity_min");
    for n in [3usize, 4] {
        let phi = lambda_mu(n, 0.5);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &phi, |b, phi| {
                b.iter(|| block_positivity_min(black_box(phi), &config(exec)).unwrap())
            });
        }
    }
    group.finish();
}

fn positivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_positive_map");
    group.sample_size(10);
    // not CP and not co-CP, so the full search runs
    let phi = tensor(&lambda_mu(3, 0.5), &random_sp_k(2, 3, 3, 3, 7).unwrap());
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| is_positive_map(black_box(&phi), &config(exec)).unwrap())
        });
    }
    group.finish();
}

fn dual_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_dual_membership");
    let cone = MappingCone::co_completely_positive(3);
    let phi = reduction_map(3);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| falsify_dual_membership(&cone, black_box(&phi), 200, &config(exec)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, product_search, positivity, dual_search);
criterion_main!(benches);
