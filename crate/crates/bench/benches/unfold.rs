use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use patchfold::fixtures::{banded_hexagon, counterexample_patch, counterexample_tolerance};
use patchfold::overlap::layout_overlaps;
use patchfold::unfold::{band_unfolding, enumerate_petal_unfoldings, petal_unfold_topless, PetalStructure, DEFAULT_PETAL_CAP};
use patchfold_bench::instances;

fn topless(c: &mut Criterion) {
    let mut g = c.benchmark_group("petal_unfold_topless");
    for n in [4, 6, 8] {
        let ps = instances(n, 16);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ps, |b, ps| {
            b.iter(|| {
                for p in ps {
                    black_box(petal_unfold_topless(p).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn overlap(c: &mut Criterion) {
    let mut g = c.benchmark_group("layout_overlaps");
    for n in [4, 6, 8] {
        let ls: Vec<_> = instances(n, 16).into_iter().map(|p| (petal_unfold_topless(&p).unwrap().layout, p.tol)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &ls, |b, ls| {
            b.iter(|| {
                for (l, tol) in ls {
                    black_box(layout_overlaps(l, tol));
                }
            })
        });
    }
    g.finish();
}

fn fixtures(c: &mut Criterion) {
    let hex = banded_hexagon();
    c.bench_function("band_unfolding/banded_hexagon", |b| b.iter(|| black_box(band_unfolding(&hex, 3).unwrap())));
    let patch = counterexample_patch().unwrap();
    let s = PetalStructure::from_patch(&patch).unwrap();
    let tol = counterexample_tolerance();
    c.bench_function("enumerate/counterexample", |b| {
        b.iter(|| {
            for (_, l) in enumerate_petal_unfoldings(&s, false, DEFAULT_PETAL_CAP).unwrap() {
                black_box(layout_overlaps(&l.unwrap(), &tol));
            }
        })
    });
}

criterion_group!(benches, topless, overlap, fixtures);
criterion_main!(benches);
