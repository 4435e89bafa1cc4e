use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qregular::corpus::{builtin_fixtures, fixture, run_fixtures, word_break_sweep};
use qregular::exec::Strategy;
use qregular::query::{cost_curve, Decider};
use qregular::Config;

const STRATEGIES: [(&str, Strategy); 2] = [("parallel", Strategy::Parallel), ("sequential", Strategy::Sequential)];

fn fixtures(c: &mut Criterion) {
    let all = builtin_fixtures();
    let mut group = c.benchmark_group("fixtures");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        let config = Config { strategy, ..Config::default() };
        group.bench_function(name, |b| b.iter(|| run_fixtures(black_box(&all), &config)));
    }
    group.finish();
}

fn word_break(c: &mut Criterion) {
    let mut group = c.benchmark_group("word_break_sweep");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        let config = Config { strategy, ..Config::default() };
        group.bench_function(name, |b| b.iter(|| word_break_sweep(black_box(2), &config).unwrap()));
    }
    group.finish();
}

fn curve(c: &mut Criterion) {
    let decider = Decider::new(&fixture("infix").unwrap().dfa().unwrap()).unwrap();
    let lengths = [256, 512, 1024, 2048];
    let mut group = c.benchmark_group("cost_curve_infix");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| cost_curve(&decider, black_box(&lengths), 8, 1, strategy).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, fixtures, word_break, curve);
criterion_main!(benches);
