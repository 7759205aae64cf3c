mod common;

use common::random_decl;
use deepind_core::emit::json::emit_json_all;
use deepind_core::encode::henry_ford_env;
use deepind_core::interp::{index_types, FinModel, Interp};
use deepind_core::{
    corpus, derive, diagnose, emit_json, henry_ford, parse_json, parse_module, print_module, Artifact, DiagCode, Env,
    Options, RuleSel,
};
use proptest::prelude::*;

const ALL: Options = Options {
    rules: RuleSel::Both,
    witness: true,
    kt: true,
};

/// Every artifact for `G` in `src`, or `None` when the declaration is diagnosed.
fn artifacts(src: &str) -> Option<(Env, Vec<Artifact>)> {
    let env = Env::from_source(src).unwrap();
    let d = env.get("G").unwrap();
    if !diagnose(d, &env).is_empty() {
        return None;
    }
    // witnesses may be refused; the rules alone must not be
    let xs = derive(d, &env, ALL)
        .or_else(|_| derive(d, &env, Options::default()))
        .unwrap();
    Some((env, xs))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let m = parse_module(&random_decl(seed)).unwrap();
        let back = parse_module(&print_module(&m)).unwrap();
        prop_assert!(m.alpha_eq(&back), "{}", print_module(&m));
    }

    #[test]
    fn henry_ford_is_idempotent(seed in any::<u64>()) {
        let env = Env::from_source(&random_decl(seed)).unwrap();
        let d = env.get("G").unwrap();
        prop_assume!(diagnose(d, &env).is_empty());
        let once = henry_ford(d, &env).unwrap();
        let hf = henry_ford_env(&env).unwrap();
        let twice = henry_ford(&once, &hf).unwrap();
        prop_assert!(once.alpha_eq(&twice), "{}\n{}", once.to_source(), twice.to_source());
    }

    #[test]
    fn json_round_trips_up_to_alpha(seed in any::<u64>()) {
        let src = random_decl(seed);
        let Some((_, xs)) = artifacts(&src) else { return Ok(()) };
        for a in &xs {
            let back = parse_json(&emit_json(a)).unwrap();
            prop_assert!(a.alpha_eq(&back), "{} in\n{src}", a.name());
        }
    }

    #[test]
    fn derivation_is_deterministic(seed in any::<u64>()) {
        let src = random_decl(seed);
        let Some((_, xs)) = artifacts(&src) else { return Ok(()) };
        let (_, ys) = artifacts(&src).unwrap();
        prop_assert_eq!(emit_json_all(&xs), emit_json_all(&ys));
    }
}

#[test]
fn corpus_artifacts_round_trip_through_json() {
    let env = Env::from_source(corpus::ALL).unwrap();
    let mut n = 0;
    for d in env.module_decls() {
        let Ok(xs) = derive(d, &env, ALL).or_else(|_| derive(d, &env, Options::default())) else {
            continue;
        };
        for a in &xs {
            let back = parse_json(&emit_json(a)).unwrap();
            assert!(a.alpha_eq(&back), "{}", a.name());
            assert_eq!(emit_json(&back), emit_json(a));
            n += 1;
        }
    }
    assert!(n > 30, "only {n} artifacts");
}

#[test]
fn generator_mostly_stays_in_the_grammar() {
    let ok = (0..200)
        .filter(|&s| {
            let env = Env::from_source(&random_decl(s)).unwrap();
            diagnose(env.get("G").unwrap(), &env).is_empty()
        })
        .count();
    assert!(ok >= 150, "{ok}/200 accepted");
}

/// A fixed seed range rather than a proptest: a few random declarations
/// build models far larger than the rest, and this keeps the run bounded.
#[test]
fn lifting_agrees_with_the_leaf_oracle() {
    let model = FinModel {
        atoms: 2,
        depth: 2,
        fn_cap: 16,
        ..Default::default()
    };
    let mut compared = 0;
    for seed in 0..100 {
        let env = Env::from_source(&random_decl(seed)).unwrap();
        if !diagnose(env.get("G").unwrap(), &env).is_empty() {
            continue;
        }
        let hf = henry_ford_env(&env).unwrap();
        let it = Interp::new(&hf, model.clone());
        let d = hf.get("G").unwrap();
        // function spaces too large for the model are skipped, not failed
        let r = match it.sweep(d, &index_types(d.arity, &it)) {
            Err(e) if e.code == DiagCode::CapExceeded => continue,
            r => r.unwrap(),
        };
        assert!(
            r.ok(),
            "seed {seed}: {r}: {:?} {:?}\n{}",
            r.disagreements,
            r.kt_failures,
            d.to_source()
        );
        compared += 1;
    }
    assert!(compared >= 75, "only {compared} of 100 declarations compared");
}
