use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quotfib::census::{census, CensusOptions};
use quotfib::exec::Execution;
use quotfib::stable_pairs::edge_orbit_comparison;

fn census_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_n3_r2_q3");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        let opts = CensusOptions { shards: 8, execution: exec, ..CensusOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, opts| {
            b.iter(|| census(3, 2, 3, opts).unwrap())
        });
    }
    group.finish();
}

fn orbit_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("edge_orbits_q2");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| edge_orbit_comparison(2, 1, 2, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, census_bench, orbit_bench);
criterion_main!(benches);
