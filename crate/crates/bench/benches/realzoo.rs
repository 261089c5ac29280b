use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use realzoo::cantorset::intervals;
use realzoo::conn::{big_four_graph, check_edge, scenario_count, star_graph};
use realzoo::points::ternary_prefix;
use realzoo::taxonomy::enumerate_blocks;
use realzoo::witness::{continuity_probe, default_spot_plans, signature_spot_check, ProbePlan};
use realzoo::zoo::{eval, representative};
use realzoo::TaggedPoint;

fn point(s: &str) -> TaggedPoint {
    s.parse().unwrap()
}

fn bench_eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval");
    let cases = [(22, "1/5"), (22, "sqrt2*1/2+0/1"), (25, "cantor:thue-morse"), (11, "pi^1*1/1+0/1"), (1, "sin(3)")];
    for (rep, at) in cases {
        let e = representative(rep, 3).unwrap();
        let p = point(at);
        for precision in [20, 40] {
            g.bench_with_input(BenchmarkId::new(format!("f{rep}@{at}"), precision), &precision, |b, &prec| {
                b.iter(|| eval(&e.expr, black_box(&p), prec))
            });
        }
    }
    g.finish();
}

fn bench_cantor(c: &mut Criterion) {
    c.bench_function("cantor/intervals_level_12", |b| b.iter(|| intervals(black_box(12)).unwrap().count()));
    let p = point("sqrt2*1/2+0/1");
    c.bench_function("cantor/ternary_prefix_64", |b| b.iter(|| ternary_prefix(black_box(&p), 64, 6)));
}

fn bench_taxonomy(c: &mut Criterion) {
    c.bench_function("taxonomy/enumerate_blocks", |b| b.iter(enumerate_blocks));
}

fn bench_witness(c: &mut Criterion) {
    let w = representative(22, 3).unwrap();
    let plan = ProbePlan::new(point("1/3"));
    c.bench_function("witness/continuity_w_at_third", |b| b.iter(|| continuity_probe(&w.expr, black_box(&plan))));
    let mut g = c.benchmark_group("witness/spot");
    g.sample_size(10);
    for rep in [1, 25, 28] {
        let e = representative(rep, 3).unwrap();
        let claims = default_spot_plans(rep).unwrap();
        g.bench_function(format!("f{rep}"), |b| b.iter(|| signature_spot_check(&e, black_box(&claims))));
    }
    g.finish();
}

fn bench_conn(c: &mut Criterion) {
    c.bench_function("conn/scenario_count_28", |b| b.iter(|| scenario_count(black_box(28))));
    c.bench_function("conn/build_graphs", |b| b.iter(|| (star_graph(), big_four_graph())));
    let big = big_four_graph();
    let mut g = c.benchmark_group("conn/check_edge");
    g.sample_size(10);
    for (from, to) in [("W", "C"), ("C", "D")] {
        g.bench_function(format!("{from}->{to}"), |b| b.iter(|| check_edge(&big, from, to, None).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_eval, bench_cantor, bench_taxonomy, bench_witness, bench_conn);
criterion_main!(benches);
