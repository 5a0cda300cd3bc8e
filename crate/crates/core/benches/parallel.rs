use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liesym::invariants::{brute_force_completeness, monomial_invariants, weight_system};
use liesym::parallel::Exec;
use liesym::parse::{parse_field, parse_system};
use liesym::prolong::{build_determining_with, VectorField};
use std::hint::black_box;

const SYSTEM: &str = include_str!("../fixtures/boundary_layer.sys");

const FIELDS: [&str; 5] = [
    "D(x)",
    "D(y)",
    "D(p)",
    "x*D(x) + u*D(u) + 2*p*D(p)",
    "y*D(y) - 2*u*D(u) - v*D(v) - 4*p*D(p)",
];

fn strategies() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn determining(c: &mut Criterion) {
    let doc = parse_system(SYSTEM).unwrap();
    let sys = doc.system().unwrap();
    let mut group = c.benchmark_group("determining system");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::new(name, "degree 1"), &exec, |b, &exec| {
            b.iter(|| build_determining_with(exec, black_box(&sys), 1).unwrap())
        });
    }
    group.finish();
}

fn completeness(c: &mut Criterion) {
    let doc = parse_system(SYSTEM).unwrap();
    let sys = doc.system().unwrap();
    let fields: Vec<VectorField> = FIELDS
        .iter()
        .map(|t| {
            VectorField::new(
                parse_field(t, &doc)
                    .unwrap()
                    .iter()
                    .map(|e| e.to_poly().unwrap())
                    .collect(),
            )
        })
        .collect();
    let ws = weight_system(&fields, sys.space(), 1).unwrap();
    let lattice = monomial_invariants(&ws);
    let mut group = c.benchmark_group("monomial completeness");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_with_input(BenchmarkId::new(name, "bound 3"), &exec, |b, &exec| {
            b.iter(|| brute_force_completeness(exec, black_box(&ws), &lattice, 3))
        });
    }
    group.finish();
}

criterion_group!(benches, determining, completeness);
criterion_main!(benches);
