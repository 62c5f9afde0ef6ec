//! Sequential vs parallel execution of the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use idalg::exactnum::{BigRational, PrimeFieldElem, PrimeModulus, Rationals};
use idalg::hasse::{axiom_suite, SuiteConfig};
use idalg::idmod::{b1_bruteforce_with, example_system, horizontal_sections_with};
use idalg::polyseries::{Poly, RatFun, TruncSeries};
use idalg::relations::find_relations_with;
use idalg::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn b1(c: &mut Criterion) {
    let mut g = c.benchmark_group("b1_bruteforce");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "p5_a4_d3"), &exec, |b, &e| {
            b.iter(|| black_box(b1_bruteforce_with(5, 4, 3, e).unwrap()))
        });
    }
    g.finish();
}

fn relations(c: &mut Criterion) {
    let order = 96;
    let f1 = RatFun::normalize(Poly::<BigRational>::from_i64s(&Rationals, &[1]), Poly::from_i64s(&Rationals, &[1, -1])).unwrap();
    let s1 = TruncSeries::from_ratfun(&f1, order);
    let s2 = TruncSeries::from_ratfun(&f1.pow(2), order);
    let s3 = s1.compose_power(2, Some(order)).unwrap();
    let series = [s1, s2, s3];
    let mut g = c.benchmark_group("find_relations");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "n3_d4_N96"), &exec, |b, &e| {
            b.iter(|| black_box(find_relations_with(&series, 4, order, false, e).unwrap()))
        });
    }
    g.finish();
}

fn sections(c: &mut Criterion) {
    let m = example_system(5, &[4, 1]).unwrap();
    let mut g = c.benchmark_group("horizontal_sections");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "p5_level1_N60"), &exec, |b, &e| {
            b.iter(|| black_box(horizontal_sections_with(&m, 60, e).unwrap()))
        });
    }
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let cfg = SuiteConfig { samples: 64, ..Default::default() };
    let m = PrimeModulus::new(7).unwrap();
    let mut g = c.benchmark_group("axiom_suite");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "F7"), &exec, |b, &e| {
            b.iter(|| black_box(axiom_suite::<PrimeFieldElem>(&m, &cfg, e)))
        });
        g.bench_with_input(BenchmarkId::new(name, "Q"), &exec, |b, &e| {
            b.iter(|| black_box(axiom_suite::<BigRational>(&Rationals, &cfg, e)))
        });
    }
    g.finish();
}

criterion_group!(benches, b1, relations, sections, axioms);
criterion_main!(benches);
