use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use surface_bench::{grown, union_of};
use surface_core::connectivity::connected;
use surface_core::tape::default_budget;
use surface_core::{
    check_surface, classify_baseline, face_dual, MeteredEngine, MeteredWorkspace, SavitchOracle,
    Triangulation, UnionFindOracle,
};

fn parse_and_validate(c: &mut Criterion) {
    let mut group = c.benchmark_group("tape");
    for n in [64, 1024, 16384] {
        let tri = grown("orientable(3)", n, 1);
        let text = tri.serialize();
        group.throughput(Throughput::Elements(tri.triangle_count() as u64));
        group.bench_with_input(BenchmarkId::new("parse", n), &text, |b, text| {
            b.iter(|| Triangulation::parse(text).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("check_surface", n), &tri, |b, tri| {
            b.iter(|| check_surface(tri).is_ok())
        });
    }
    group.finish();
}

fn baseline(c: &mut Criterion) {
    let mut group = c.benchmark_group("baseline");
    for n in [64, 1024, 16384] {
        let tri = grown("nonorientable(3):b=2", n, 2);
        group.throughput(Throughput::Elements(tri.triangle_count() as u64));
        group.bench_with_input(BenchmarkId::new("classify", n), &tri, |b, tri| {
            b.iter(|| classify_baseline(tri).unwrap())
        });
    }
    group.finish();
}

fn metered(c: &mut Criterion) {
    let mut group = c.benchmark_group("metered");
    group.sample_size(10);
    for parts in [1, 2, 3] {
        let tri = union_of(parts, 5);
        group.bench_with_input(BenchmarkId::new("classify_unionfind", parts), &tri, |b, tri| {
            b.iter(|| {
                let uf = UnionFindOracle::caching();
                let ws = MeteredWorkspace::new(default_budget(tri.tape_symbols()));
                MeteredEngine::new(&uf).with_corner_oracle(&uf).classify(tri, &ws).unwrap()
            })
        });
    }
    let klein = Triangulation::parse(surface_core::KLEIN_TAPE).unwrap();
    group.bench_function("classify_savitch_klein", |b| {
        b.iter(|| {
            let ws = MeteredWorkspace::new(default_budget(klein.tape_symbols()));
            MeteredEngine::new(&SavitchOracle).classify(&klein, &ws).unwrap()
        })
    });
    group.finish();
}

fn oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("connectivity");
    for n in [4, 8, 12] {
        let dual = face_dual(&grown("sphere", n, 3));
        let order = dual.order();
        group.bench_with_input(BenchmarkId::new("savitch", order), &dual, |b, g| {
            b.iter(|| connected(&SavitchOracle, g, 1, order).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("unionfind", order), &dual, |b, g| {
            b.iter(|| connected(&UnionFindOracle::new(), g, 1, order).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, parse_and_validate, baseline, metered, oracles);
criterion_main!(benches);
