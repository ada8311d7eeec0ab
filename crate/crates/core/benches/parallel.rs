//! Sequential against data-parallel execution for each parallel site.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entcap::capreport::acyclic_orientations;
use entcap::codingsearch::{exhaustive_achievable, SearchConfig};
use entcap::fixtures;
use entcap::gen::{property_sweep, random_network, GenParams};
use entcap::netmodel::{min_cut_with, MinCutOptions};
use entcap::tnrank::{estimate_r1_with, PrimeField, DEFAULT_PRIME};
use entcap::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn min_cut(c: &mut Criterion) {
    // 14 free vertices: 16k bipartitions
    let params = GenParams {
        max_vertices: 16,
        max_dim: 4,
        max_edges: 40,
    };
    let net = (0..)
        .map(|s| random_network(s, params))
        .find(|n| n.vertices.len() == 16)
        .unwrap();
    let mut group = c.benchmark_group("min_cut");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| min_cut_with(black_box(&net), MinCutOptions { exec, ..Default::default() }).unwrap())
        });
    }
    group.finish();
}

fn rank_trials(c: &mut Criterion) {
    let net = fixtures::fig2_counterexample();
    let field = PrimeField::new(DEFAULT_PRIME).unwrap();
    let mut group = c.benchmark_group("rank_trials");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 16), &16, |b, &trials| {
            b.iter(|| estimate_r1_with(black_box(&net), field, trials, 0, exec).unwrap())
        });
    }
    group.finish();
}

fn coding_search(c: &mut Criterion) {
    let (_, net) = acyclic_orientations(&fixtures::n_d5(4), false)
        .unwrap()
        .into_iter()
        .find(|(label, _)| label == "e5:vu")
        .unwrap();
    let mut group = c.benchmark_group("coding_search_l6");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| exhaustive_achievable(black_box(&net), &SearchConfig { exec, ..SearchConfig::new(6) }).unwrap())
        });
    }
    group.finish();
}

fn property_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("property_sweep_50");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| property_sweep(50, 0, GenParams::default(), exec)));
    }
    group.finish();
}

criterion_group!(benches, min_cut, rank_trials, coding_search, property_sweeps);
criterion_main!(benches);
