//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//!
//! Run with `cargo test -p deepind-cli --test acceptance -- --nocapture`
//! to see the table.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use deepind_core::corpus;
use deepind_core::diag::DiagCode;
use deepind_core::emit::text::wclause;
use deepind_core::encode::{henry_ford, henry_ford_env};
use deepind_core::induct::{derive_deep_rule, derive_structural_rule, RuleDef};
use deepind_core::interp::{index_types, FinModel, Interp, SemType};
use deepind_core::kt::derive_kt_witness;
use deepind_core::lift::derive_data_lifting;
use deepind_core::simplify::structural_from_deep;
use deepind_core::witness::{check_witness, derive_lift_map, has_map, known_globals, synth_witness, WitnessDef};
use deepind_core::{diagnose, DataDecl, Env, Style};

type Check = Result<String, String>;

struct Outcome {
    id: usize,
    title: &'static str,
    result: Check,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.result.is_ok() && self.limit.is_none_or(|l| self.elapsed < l)
    }

    fn line(&self) -> String {
        let detail = match &self.result {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        let limit = match self.limit {
            Some(l) => format!(" (limit {:.0?})", l),
            None => String::new(),
        };
        format!(
            "[{}] {:>2}. {} - {:.2?}{} - {}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed,
            limit,
            detail
        )
    }
}

fn run(id: usize, title: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Check) -> Outcome {
    let t = Instant::now();
    let result = f();
    Outcome {
        id,
        title,
        result,
        elapsed: t.elapsed(),
        limit,
    }
}

fn env_of(src: &str) -> Env {
    Env::from_source(src).expect("corpus parses")
}

fn decl<'e>(env: &'e Env, name: &str) -> &'e DataDecl {
    env.get(name).unwrap_or_else(|| panic!("{name} is declared"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// golden comparisons

struct Golden<'a> {
    env: &'a Env,
    fx: Fixtures,
    checked: usize,
}

impl Golden<'_> {
    fn lifting(&mut self, name: &str) -> Result<(), String> {
        let l = derive_data_lifting(decl(self.env, name), self.env).map_err(|e| e.to_string())?;
        let lines = self.fx.get("lifting", name);
        let (sig, clauses) = lines.split_first().ok_or("empty lifting fixture")?;
        let sig = sig.split_once(" : ").ok_or("lifting fixture lacks a signature")?.1;
        ensure(same_up_to_binders(&term(sig, self.env), &l.signature), || {
            format!("{name}^ signature differs: {}", l.signature)
        })?;
        ensure(clauses.len() == l.clauses.len(), || {
            format!("{name}^ has {} clauses, fixture {}", l.clauses.len(), clauses.len())
        })?;
        for (line, c) in clauses.iter().zip(&l.clauses) {
            let (fl, fr) = equation(line, self.env);
            let ours = close_equation(&l.lhs(c), &c.body);
            ensure(same_up_to_binders(&close_equation(&fl, &fr), &ours), || {
                format!(
                    "{name}^ clause {} differs:\n  derived  {} = {}\n  fixture  {line}",
                    c.ctor,
                    l.lhs(c),
                    c.body
                )
            })?;
        }
        self.checked += 1 + clauses.len();
        Ok(())
    }

    fn rule(&self, name: &str, deep: bool) -> Result<RuleDef, String> {
        let d = decl(self.env, name);
        if deep {
            derive_deep_rule(d, self.env)
        } else {
            derive_structural_rule(d, self.env)
        }
        .map_err(|e| e.to_string())
    }

    fn hypothesis(&mut self, decl_name: &str, hyp: &str) -> Result<(), String> {
        let r = self.rule(decl_name, true)?;
        let h = r
            .hypotheses
            .iter()
            .find(|h| h.name == hyp)
            .ok_or(format!("no hypothesis {hyp}"))?;
        let fx = term(&self.fx.get("hypothesis", hyp)[0], self.env);
        ensure(same_up_to_binders(&fx, &h.term), || {
            format!("{hyp} differs:\n  derived  {}", h.term)
        })?;
        self.checked += 1;
        Ok(())
    }

    fn statement(&mut self, kind: &str, name: &str) -> Result<(), String> {
        let (deep, inlined) = match kind {
            "deep" => (true, false),
            "deep-inlined" => (true, true),
            "structural-inlined" => (false, true),
            _ => return Err(format!("unknown fixture kind {kind}")),
        };
        let r = self.rule(name, deep)?;
        let ours = if inlined { r.inlined() } else { r.statement.clone() };
        let fx = term(&self.fx.get(kind, name)[0], self.env);
        ensure(same_up_to_binders(&fx, &ours), || {
            format!("{kind} rule for {name} differs:\n  derived  {ours}")
        })?;
        self.checked += 1;
        Ok(())
    }

    /// Clauses compared up to renaming of pattern variables; the arguments
    /// a clause passes to a hypothesis follow that hypothesis's binder order,
    /// so both sides are put in canonical telescope order first.
    fn witness(&mut self, name: &str) -> Result<(), String> {
        let d = decl(self.env, name);
        let w: WitnessDef = synth_witness(d, self.env).map_err(|e| e.to_string())?;
        let rule = self.rule(name, true)?;
        let mut ours_order = BTreeMap::new();
        let mut fx_order = BTreeMap::new();
        for h in &rule.hypotheses {
            let arg = deepind_core::witness::hyp_arg(&h.ctor);
            let (bs, body) = hypothesis_binders(&h.term);
            let mine = telescope_order(&bs, &body);
            let theirs = match self
                .fx
                .entries
                .iter()
                .find(|(k, n, _)| k == "hypothesis" && *n == h.name)
            {
                Some((_, _, ls)) => {
                    let (bs, body) = hypothesis_binders(&term(&ls[0], self.env));
                    telescope_order(&bs, &body)
                }
                None => mine.clone(),
            };
            ours_order.insert(arg.clone(), mine);
            fx_order.insert(arg, theirs);
        }
        let lines = self.fx.get("witness", name);
        ensure(lines.len() == w.clauses.len(), || {
            format!("{} has {} clauses, fixture {}", w.name, w.clauses.len(), lines.len())
        })?;
        for (line, c) in lines.iter().zip(&w.clauses) {
            let text = wclause(&w.name, c, Style::ASCII);
            let (ol, or) = equation(&text, self.env);
            let (fl, fr) = equation(line, self.env);
            let ours = close_equation(&ol, &reorder_hyp_args(&or, &ours_order));
            let theirs = close_equation(&fl, &reorder_hyp_args(&fr, &fx_order));
            ensure(ours.alpha_eq(&theirs), || {
                format!(
                    "{} clause {} differs:\n  derived  {text}\n  fixture  {line}",
                    w.name, c.ctor
                )
            })?;
        }
        self.checked += lines.len();
        Ok(())
    }
}

fn golden(src: &str, fixture: &str, steps: impl FnOnce(&mut Golden) -> Result<(), String>) -> Check {
    let env = env_of(src);
    let mut g = Golden {
        env: &env,
        fx: fixtures(fixture),
        checked: 0,
    };
    steps(&mut g)?;
    Ok(format!("{} fixture items match", g.checked))
}

// criteria

fn c1() -> Check {
    golden(
        corpus::EQUAL,
        include_str!("../../core/tests/fixtures/equal.txt"),
        |g| {
            g.lifting("Equal")?;
            g.hypothesis("Equal", "dIndRefl")?;
            g.statement("deep", "Equal")?;
            g.statement("structural-inlined", "Equal")?;
            g.witness("Equal")
        },
    )
}

fn c2() -> Check {
    golden(corpus::SEQ, include_str!("../../core/tests/fixtures/seq.txt"), |g| {
        g.lifting("Seq")?;
        g.hypothesis("Seq", "dIndConst")?;
        g.hypothesis("Seq", "dIndPair")?;
        g.statement("deep", "Seq")?;
        g.witness("Seq")
    })
}

fn c3() -> Check {
    golden(
        corpus::LTERM,
        include_str!("../../core/tests/fixtures/lterm.txt"),
        |g| {
            g.lifting("LType")?;
            g.lifting("LTerm")?;
            for h in ["dIndVar", "dIndAbs", "dIndApp", "dIndList"] {
                g.hypothesis("LTerm", h)?;
            }
            g.statement("deep", "LTerm")?;
            g.witness("LTerm")
        },
    )
}

fn c4() -> Check {
    let src = [corpus::PTREE, corpus::BUSH].concat();
    golden(&src, include_str!("../../core/tests/fixtures/nested.txt"), |g| {
        g.statement("deep-inlined", "PTree")?;
        g.statement("deep-inlined", "Bush")?;
        g.lifting("Bush")?;
        g.statement("structural-inlined", "List")?;
        g.statement("deep-inlined", "List")
    })
}

fn c5() -> Check {
    let env = env_of(corpus::NESTED_GADT);
    let g = decl(&env, "G");
    let ds = diagnose(g, &env);
    let d = ds.first().ok_or("no diagnostic")?;
    ensure(ds.len() == 1 && d.code == DiagCode::TrulyNestedGadt, || {
        format!("diagnostics: {ds:?}")
    })?;
    let text = format!("{} {}", d.message, d.explanation);
    ensure(text.contains("G^Map"), || {
        format!("explanation does not name G^Map: {text}")
    })?;
    ensure(text.contains("Q'_B"), || {
        format!("explanation does not name Q'_B: {text}")
    })?;
    ensure(deepind_core::derive(g, &env, Default::default()).is_err(), || {
        "artifacts were derived".into()
    })?;
    // the command line: exit status 1, nothing on stdout
    let dir = std::env::temp_dir().join(format!("deepind-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let file = dir.join("nested_gadt.gdt");
    std::fs::write(&file, corpus::NESTED_GADT).map_err(|e| e.to_string())?;
    for sub in ["check", "derive"] {
        let out = Command::new(env!("CARGO_BIN_EXE_deepind"))
            .arg(sub)
            .arg(&file)
            .output()
            .map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(1), || {
            format!("`{sub}` exited with {:?}", out.status.code())
        })?;
        ensure(stderr.contains("TRULY_NESTED_GADT"), || {
            format!("`{sub}` stderr: {stderr}")
        })?;
        if sub == "derive" {
            ensure(out.stdout.is_empty(), || "`derive` printed artifacts".into())?;
        }
    }
    Ok("TRULY_NESTED_GADT naming G^Map and Q'_B; exit 1 from check and derive; no artifacts".into())
}

const COHERENCE: &[&str] = &["Equal", "Seq", "LType", "LTerm", "List", "Rose", "PTree"];

fn c6() -> Check {
    let env = env_of(&[corpus::ALL].concat());
    let mut agree = 0;
    let mut bad = Vec::new();
    for name in COHERENCE {
        let d = decl(&env, name);
        let deep = derive_deep_rule(d, &env).map_err(|e| e.to_string())?;
        let direct = derive_structural_rule(d, &env).map_err(|e| e.to_string())?;
        let simplified = structural_from_deep(&deep.inlined(), "P");
        if simplified.alpha_eq(&direct.inlined()) {
            agree += 1;
        } else {
            bad.push(format!(
                "{name}:\n  simplified {simplified}\n  direct     {}",
                direct.inlined()
            ));
        }
    }
    ensure(bad.is_empty(), || bad.join("\n"))?;
    Ok(format!("{agree}/{} declarations agree", COHERENCE.len()))
}

fn hf_corpus() -> Env {
    henry_ford_env(&env_of(corpus::ALL)).expect("corpus encodes")
}

fn c7() -> Check {
    let env = hf_corpus();
    let it = Interp::new(&env, FinModel::default());
    let (mut cmp, mut vals) = (0, 0);
    let mut bad = Vec::new();
    for name in ["Seq", "LTerm", "List", "Rose", "PTree"] {
        let d = decl(&env, name);
        let r = it.sweep(d, &index_types(d.arity, &it)).map_err(|e| e.to_string())?;
        cmp += r.comparisons;
        vals += r.values;
        if !r.disagreements.is_empty() {
            bad.push(format!("{r}: {:?}", &r.disagreements[..r.disagreements.len().min(3)]));
        }
        ensure(r.comparisons > 0, || format!("{name}: nothing compared"))?;
    }
    ensure(bad.is_empty(), || bad.join("\n"))?;
    Ok(format!(
        "{cmp} comparisons over {vals} values, 0 disagreements (carriers 3, depth 3)"
    ))
}

fn c8() -> Check {
    let env = hf_corpus();
    let it = Interp::new(&env, FinModel::default());
    let mut vals = 0;
    let mut bad = Vec::new();
    for d in env.module_decls() {
        let r = it.sweep(d, &index_types(d.arity, &it)).map_err(|e| e.to_string())?;
        vals += r.values;
        if !r.kt_failures.is_empty() {
            bad.push(format!("{r}: {:?}", &r.kt_failures[..r.kt_failures.len().min(3)]));
        }
    }
    ensure(bad.is_empty(), || bad.join("\n"))?;
    let lt = env_of(corpus::LTERM);
    let k = derive_kt_witness(decl(&lt, "LTerm"), &lt).map_err(|e| e.to_string())?;
    let want: BTreeSet<String> = ["Equal^ArrKT", "Equal^ListKT"].iter().map(|s| s.to_string()).collect();
    ensure(k.postulate_names() == want, || {
        format!("LTerm postulates: {:?}", k.postulate_names())
    })?;
    Ok(format!(
        "{vals} values satisfy the lifting at all-true tables; LTerm postulates {:?}",
        k.postulate_names()
    ))
}

fn c9() -> Check {
    let env = env_of(corpus::ALL);
    let hf = henry_ford_env(&env).map_err(|e| format!("{e:?}"))?;
    for d in env.module_decls() {
        let once = henry_ford(d, &env).map_err(|e| e.to_string())?;
        let twice = henry_ford(&once, &hf).map_err(|e| e.to_string())?;
        ensure(once.alpha_eq(&twice), || {
            format!(
                "{} is not a fixed point:\n{}\n{}",
                d.name,
                once.to_source(),
                twice.to_source()
            )
        })?;
    }
    let before = Interp::new(&env, FinModel::default());
    let after = Interp::new(&hf, FinModel::default());
    let mut instances = 0;
    let mut total = 0;
    for d in env.module_decls() {
        for ts in index_types(d.arity, &before) {
            let ty = SemType::Data(d.name.clone(), ts.clone());
            let a = before.enumerate(&ty, 3).map_err(|e| e.to_string())?.len();
            let b = after.enumerate(&ty, 3).map_err(|e| e.to_string())?.len();
            ensure(a == b, || format!("{ty}: {a} inhabitants before encoding, {b} after"))?;
            instances += 1;
            total += a;
        }
    }
    Ok(format!(
        "idempotent on {} declarations; counts agree on {instances} instances ({total} inhabitants)",
        env.module_decls().len()
    ))
}

/// Every witness `d` emits, checked; returns (witnesses checked, refusals).
fn check_all_witnesses(d: &DataDecl, env: &Env) -> Result<(usize, Vec<String>), String> {
    let mut n = 0;
    let mut refused = Vec::new();
    let mut check = |w: &WitnessDef, extra: &[String]| -> Result<(), String> {
        let v = check_witness(w, d, &known_globals(env, extra));
        n += 1;
        ensure(v.is_empty(), || format!("{}: {v:?}\n{}", w.name, d.to_source()))
    };
    match synth_witness(d, env) {
        Ok(w) => check(&w, &[])?,
        Err(e) => refused.push(format!("{}: {}", d.name, e.code)),
    }
    if has_map(&d.name, env) {
        match derive_lift_map(d, env) {
            Ok(w) => check(&w, &[])?,
            Err(e) => refused.push(format!("{} map: {}", d.name, e.code)),
        }
    }
    match derive_kt_witness(d, env) {
        Ok(k) => {
            let mut extra: Vec<String> = k.postulate_names().into_iter().collect();
            extra.extend(k.auxiliary.iter().map(|p| p.name.clone()));
            check(&k.def, &extra)?;
        }
        Err(e) => refused.push(format!("{} K_T: {}", d.name, e.code)),
    }
    Ok((n, refused))
}

fn c10() -> Check {
    let env = env_of(corpus::ALL);
    let mut total = 0;
    let mut refusals = Vec::new();
    for d in env.module_decls() {
        let (n, r) = check_all_witnesses(d, &env)?;
        total += n;
        refusals.extend(r);
    }
    let corpus_count = total;
    let mut accepted = 0;
    let mut seed = 0u64;
    let mut rejected_by_grammar = 0;
    while accepted < 50 {
        let src = random_decl(seed);
        seed += 1;
        let env = Env::from_source(&src).map_err(|e| format!("generated source does not parse: {e:?}\n{src}"))?;
        let d = decl(&env, "G");
        if !diagnose(d, &env).is_empty() {
            rejected_by_grammar += 1;
            continue;
        }
        accepted += 1;
        let (n, r) = check_all_witnesses(d, &env).map_err(|e| format!("seed {}: {e}", seed - 1))?;
        total += n;
        refusals.extend(r.into_iter().map(|r| format!("seed {}: {r}", seed - 1)));
    }
    ensure(rejected_by_grammar * 4 <= seed as usize, || {
        format!("generator too loose: {rejected_by_grammar} of {seed} declarations rejected")
    })?;
    Ok(format!(
        "0 violations in {total} witnesses ({corpus_count} corpus, {} from 50 random GADTs); refused with a diagnostic: {}",
        total - corpus_count,
        if refusals.is_empty() { "none".to_string() } else { refusals.join(", ") }
    ))
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let outcomes = [
        run(1, "golden: Equal", Some(s(1)), c1),
        run(2, "golden: Seq", Some(s(1)), c2),
        run(3, "golden: LType/LTerm", Some(s(2)), c3),
        run(4, "golden: PTree, Bush, List", Some(s(1)), c4),
        run(5, "rejection of truly nested GADTs", None, c5),
        run(6, "deep/structural coherence", None, c6),
        run(7, "oracle equivalence", Some(s(60)), c7),
        run(8, "K_T inhabitation and postulates", None, c8),
        run(9, "Henry Ford idempotence and preservation", None, c9),
        run(10, "structural soundness of witnesses", None, c10),
    ];
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
