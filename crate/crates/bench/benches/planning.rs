use criterion::{criterion_group, criterion_main, Criterion};
use harp_bench::{crossing, doorway, regions};
use harp_core::abstraction::Abstraction;
use harp_core::harp::{harp_plan, HarpConfig};
use harp_core::hl_search::HeuristicTable;
use harp_core::ll_planner::{baseline, Budget, PlannerKind};
use harp_core::seeding::rng_for;
use std::hint::black_box;

fn cspace(c: &mut Criterion) {
    let space = doorway();
    let mut rng = rng_for(1, &[]);
    let xs: Vec<_> = (0..256).map(|_| space.sample_uniform(&mut rng)).collect();
    c.bench_function("collides/256", |b| {
        b.iter(|| xs.iter().filter(|x| space.collides(black_box(&x.0))).count())
    });
    let q = crossing(&space);
    c.bench_function("local_path_free/crossing", |b| {
        b.iter(|| space.local_path_free(black_box(&q.start), black_box(&q.goal), space.default_step()))
    });
}

fn abstraction(c: &mut Criterion) {
    let space = doorway();
    let abs = Abstraction::new(&space, regions(&space)).unwrap();
    let mut rng = rng_for(2, &[]);
    let xs: Vec<_> = (0..256).map(|_| space.sample_uniform(&mut rng)).collect();
    c.bench_function("nearest_region/256", |b| {
        b.iter(|| xs.iter().filter_map(|x| abs.index().nearest_region(&space, black_box(&x.0))).count())
    });
}

fn planners(c: &mut Criterion) {
    let space = doorway();
    let regions = regions(&space);
    let q = crossing(&space);
    let mut group = c.benchmark_group("plan");
    group.sample_size(20);
    for kind in [PlannerKind::Llp, PlannerKind::Birrt] {
        let planner = baseline(kind).unwrap();
        group.bench_function(kind.name(), |b| {
            b.iter(|| planner.plan(&space, &q, Budget::samples(20_000), &mut rng_for(4, &[])).unwrap())
        });
    }
    let config = HarpConfig::default();
    group.bench_function("harp", |b| {
        b.iter(|| {
            let mut table = HeuristicTable::new(regions.len());
            harp_plan(&space, &regions, &mut table, &config, &q, Budget::samples(20_000), &mut rng_for(4, &[])).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, cspace, abstraction, planners);
criterion_main!(benches);
