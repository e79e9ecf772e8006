use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hf_bench::dense;
use hf_core::cfk::{slice_map, SliceOp};
use hf_core::floer::{hf_infinity, hf_plus_reduced, DegreeWindow};
use hf_core::linalg::smith_normal_form;
use hf_core::Ring;

fn exterior(c: &mut Criterion) {
    let mut group = c.benchmark_group("exterior");
    for g in [3, 5] {
        let (a, b) = (dense(g, 1), dense(g, 7));
        group.bench_with_input(BenchmarkId::new("wedge", g), &g, |bch, _| {
            bch.iter(|| black_box(&a).wedge(&b).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("contract", g), &g, |bch, _| {
            bch.iter(|| black_box(&a).contract(&b).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("star", g), &g, |bch, _| {
            bch.iter(|| black_box(&a).star())
        });
    }
    group.finish();
}

fn slices(c: &mut Criterion) {
    let mut group = c.benchmark_group("slice");
    group.sample_size(10);
    for g in [4, 5] {
        group.bench_with_input(BenchmarkId::new("F_0", g), &g, |bch, &g| {
            bch.iter(|| slice_map(g, SliceOp::F(0), 0, Ring::Integers).unwrap())
        });
        let m = slice_map(g, SliceOp::OnePlusJ, g as i64, Ring::Integers)
            .unwrap()
            .matrix;
        group.bench_with_input(BenchmarkId::new("snf_1+J", g), &m, |bch, m| {
            bch.iter(|| smith_normal_form(m).unwrap())
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("table");
    group.sample_size(10);
    group.bench_function("infinity_g5_Z", |b| {
        b.iter(|| hf_infinity(5, Ring::Integers, DegreeWindow::new(0, 1).unwrap()).unwrap())
    });
    group.bench_function("reduced_g5_Q", |b| {
        b.iter(|| hf_plus_reduced(5, Ring::Rationals, DegreeWindow::default_for(5)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exterior, slices, tables);
criterion_main!(benches);
