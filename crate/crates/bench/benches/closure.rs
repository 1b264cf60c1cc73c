use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use closure_core::catalog::Parameters;
use closure_core::closure::{m_closure, two_closure};
use closure_core::linear::{affine_group, MatrixGroup};
use closure_core::pipeline::{run_pipeline, PipelineConfig};
use closure_core::products::{product, ProductMode};
use closure_core::PermGroup;

fn schreier_sims(c: &mut Criterion) {
    let gl = MatrixGroup::general_linear(2, 1, 4).unwrap();
    let agl = affine_group(&gl).unwrap();
    let gens = agl.generators().to_vec();
    c.bench_function("schreier_sims AGL(4,2)", |b| {
        b.iter(|| PermGroup::new(16, black_box(gens.clone())).unwrap())
    });
}

fn closures(c: &mut Criterion) {
    let gl = MatrixGroup::general_linear(3, 1, 2).unwrap();
    let agl = affine_group(&gl).unwrap();
    c.bench_function("two_closure AGL(2,3)", |b| b.iter(|| two_closure(black_box(&agl)).unwrap()));
    c.bench_function("three_closure AGL(2,3)", |b| b.iter(|| m_closure(black_box(&agl), 3).unwrap()));

    let w = product(&PermGroup::symmetric(4), &PermGroup::alternating(3), ProductMode::Power).unwrap();
    c.bench_function("two_closure S4 power A3", |b| b.iter(|| two_closure(black_box(&w)).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let cfg = PipelineConfig::new(Parameters::new(5, 2, 1, 2));
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    g.bench_function("(5,2,1,2)", |b| b.iter(|| run_pipeline(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, schreier_sims, closures, pipeline);
criterion_main!(benches);
