use criterion::{black_box, criterion_group, criterion_main, Criterion};
use deepind_bench::corpus_env;
use deepind_core::encode::henry_ford_env;
use deepind_core::interp::{index_types, FinModel, Interp};
use deepind_core::{corpus, derive, emit_json, parse_module, Env, Options, RuleSel};

fn parsing(c: &mut Criterion) {
    c.bench_function("parse corpus", |b| {
        b.iter(|| parse_module(black_box(corpus::ALL)).unwrap())
    });
    c.bench_function("classify corpus", |b| {
        b.iter(|| Env::from_source(black_box(corpus::ALL)).unwrap())
    });
}

fn derivation(c: &mut Criterion) {
    let env = corpus_env();
    let opts = Options {
        rules: RuleSel::Both,
        witness: true,
        kt: true,
    };
    let mut g = c.benchmark_group("derive");
    for name in ["Seq", "LTerm", "PTree", "Rose"] {
        let d = env.get(name).unwrap();
        g.bench_function(name, |b| b.iter(|| derive(black_box(d), &env, opts).unwrap()));
    }
    g.finish();
    let d = env.get("LTerm").unwrap();
    let xs = derive(d, &env, opts).unwrap();
    c.bench_function("emit json LTerm", |b| {
        b.iter(|| xs.iter().map(emit_json).collect::<Vec<_>>())
    });
}

fn oracle(c: &mut Criterion) {
    let env = henry_ford_env(&corpus_env()).unwrap();
    let mut g = c.benchmark_group("oracle sweep");
    g.sample_size(10);
    for name in ["Seq", "List", "PTree"] {
        let d = env.get(name).unwrap();
        g.bench_function(name, |b| {
            b.iter(|| {
                // a fresh interpreter, so caches do not carry over
                let it = Interp::new(&env, FinModel::default());
                it.sweep(d, &index_types(d.arity, &it)).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, parsing, derivation, oracle);
criterion_main!(benches);
