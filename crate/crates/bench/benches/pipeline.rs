use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use l6n1_bench::sample;
use l6n1_core::generator::{connected_maps, EnumerationFilter};
use l6n1_core::{enumerate_projections, kauffman_bracket, reduce, resolve_l6n1};

fn bench_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for n in [8, 11, 14] {
        let inputs = sample(n, 16);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inputs, |b, inputs| {
            b.iter(|| {
                for p in inputs {
                    black_box(reduce(p).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn bench_resolve(c: &mut Criterion) {
    let inputs = sample(12, 8);
    c.bench_function("resolve_and_bracket/12", |b| {
        b.iter(|| {
            for p in &inputs {
                let d = resolve_l6n1(p).unwrap();
                black_box(kauffman_bracket(&d.link_diagram()).unwrap());
            }
        })
    });
}

fn bench_bracket(c: &mut Criterion) {
    let mut group = c.benchmark_group("bracket");
    group.sample_size(10);
    for n in [10, 14, 18] {
        let d = resolve_l6n1(&sample(n, 1)[0]).unwrap().link_diagram();
        group.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| black_box(kauffman_bracket(d).unwrap()))
        });
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("curves/6", |b| b.iter(|| black_box(connected_maps(6, 1))));
    group.bench_function("projections/7", |b| {
        b.iter(|| black_box(enumerate_projections(EnumerationFilter::new(7)).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_reduce, bench_resolve, bench_bracket, bench_enumerate);
criterion_main!(benches);
