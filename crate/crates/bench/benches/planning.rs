use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use topoplan::clock::BudgetMode;
use topoplan::geometry::{pairwise_distance, Pose, Primitive};
use topoplan::harness::{analyze, fixture};
use topoplan::planner::{default_config, make_checker, run_planner, PlannerId};
use topoplan::robot::Configuration;
use topoplan::topology::{build_topo_graph, detect_simple_loops};

fn distance(c: &mut Criterion) {
    let a = Primitive::capsule(0.02, 0.3).unwrap();
    let b = Primitive::cuboid(0.025, 0.5, 0.15).unwrap();
    let pa = Pose::from_xyz_rpy([0.1, 0.05, 0.4], [0.3, 1.2, -0.4]);
    let pb = Pose::from_xyz_rpy([0.0, 0.0, 0.15], [0.0, 0.0, 0.0]);
    c.bench_function("distance/capsule_box", |bench| {
        bench.iter(|| pairwise_distance(black_box(&a), &pa, black_box(&b), &pb))
    });
}

fn config_check(c: &mut Criterion) {
    let scene = fixture("rubble").unwrap().scene();
    let checker = make_checker(&scene, &default_config());
    let q = Configuration::new(vec![-0.3, 0.1, 0.5, 0.2, 0.1, 1.4]);
    c.bench_function("checker/config_valid_rubble", |bench| bench.iter(|| checker.config_valid(black_box(&q))));
}

fn topology(c: &mut Criterion) {
    let scene = fixture("shelf").unwrap().scene();
    let cfg = default_config();
    c.bench_function("topology/shelf_loops", |bench| {
        bench.iter(|| {
            let g = build_topo_graph(black_box(&scene), cfg.contact_tol).unwrap();
            detect_simple_loops(&g, cfg.max_loop_len)
        })
    });
    let scene = fixture("two_chamber").unwrap().scene();
    let mut group = c.benchmark_group("channel_graph");
    group.sample_size(10);
    group.bench_function("two_chamber", |bench| bench.iter(|| analyze(black_box(&scene), &cfg, true).unwrap()));
    group.finish();
}

fn planning(c: &mut Criterion) {
    let mut cfg = default_config();
    cfg.budget_mode = BudgetMode::deterministic();
    let mut group = c.benchmark_group("plan");
    group.sample_size(10);
    for (name, planner) in [("frame", PlannerId::Tapom), ("frame", PlannerId::RrtConnect)] {
        let scene = fixture(name).unwrap().scene();
        group.bench_function(format!("{name}/{planner}"), |bench| {
            bench.iter(|| run_planner(black_box(&scene), planner, &cfg))
        });
    }
    group.finish();
}

criterion_group!(benches, distance, config_check, topology, planning);
criterion_main!(benches);
