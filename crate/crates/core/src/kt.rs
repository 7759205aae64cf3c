//! `G^KT : forall A.. (x : G A..) -> G^ A.. K_T.. x`, the proof that the
//! lifting at constantly-true predicates holds everywhere.
//!
//! The liftings only agree with `K_T` up to isomorphism (`Pair^ B C K_T K_T`
//! is not `K_T`), so each `Equal^` obligation whose right-hand predicate is
//! not literally `K_T` is discharged by a postulated lemma
//! `Equal^<Head>KT`. Recursive positions at a non-trivial predicate go
//! through a lifting map when the type has one and through the auxiliary
//! `H^EqualMap` otherwise.

use std::collections::BTreeSet;

use crate::diag::Diagnostic;
use crate::induct::derive_deep_rule;
use crate::ir::{DataDecl, Env, ShapeF, TypeExpr, EQUAL};
use crate::lift::{carrier_names, lift_type, prepare, q_name, ARR, PAIR, SUM, UNIT};
use crate::term::{self, Term};
use crate::witness::{
    equal_map_name, has_map, kept_conjuncts, kt_name, map_name, pattern, tuple, wapp, wty, wvar, Fresh, Postulate,
    WClause, WTerm, WitnessDef, WitnessKind,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtWitness {
    pub def: WitnessDef,
    /// Lemmas `Equal^<Head>KT` the clauses cite.
    pub postulates: Vec<Postulate>,
    /// `H^EqualMap` signatures the clauses use, defined by the same recipe.
    pub auxiliary: Vec<Postulate>,
}

impl KtWitness {
    pub fn postulate_names(&self) -> BTreeSet<String> {
        self.postulates.iter().map(|p| p.name.clone()).collect()
    }
}

fn kt_pred(v: &str) -> Term {
    term::ktop(term::var(v))
}

fn kt_of(t: &TypeExpr) -> Term {
    lift_type(t, &kt_pred)
}

fn head_name(t: &TypeExpr) -> &str {
    match t {
        TypeExpr::Var(v) => v,
        TypeExpr::Unit => UNIT,
        TypeExpr::Prod(..) => PAIR,
        TypeExpr::Sum(..) => SUM,
        TypeExpr::Arrow(..) => ARR,
        TypeExpr::Data(h, _) => h,
    }
}

fn vars_in_order(ts: &[&TypeExpr]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in ts {
        let mut fv = Vec::new();
        t.free_vars(&mut fv);
        for v in fv {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// `Equal^ X K (X^ at K_T) (K^ at K_T) e` for every `e : Equal X K`.
fn equal_obligation(x: &TypeExpr, k: &TypeExpr) -> Term {
    let (a, b) = (x.clone(), k.clone());
    let fv = vars_in_order(&[&a, &b]);
    let mut binders: Vec<(String, Term)> = fv.iter().map(|v| (v.clone(), Term::Set)).collect();
    binders.push((
        "e".into(),
        term::app(term::data(EQUAL), vec![Term::from_type(&a), Term::from_type(&b)]),
    ));
    let body = term::app(
        term::lift(EQUAL),
        vec![
            Term::from_type(&a),
            Term::from_type(&b),
            kt_of(&a),
            kt_of(&b),
            term::var("e"),
        ],
    );
    term::pis(&binders, body)
}

struct Kt<'a> {
    g: &'a str,
    env: &'a Env,
    name: String,
    postulates: Vec<Postulate>,
    auxiliary: Vec<Postulate>,
}

impl Kt<'_> {
    /// Cite the lemma for `Equal X K`, adding it on first use.
    fn cite(&mut self, x: &TypeExpr, k: &TypeExpr, e: WTerm) -> WTerm {
        // canonical variable names make equal obligations share one lemma
        let fv = vars_in_order(&[x, k]);
        let taken: BTreeSet<String> = self.env.all().iter().map(|d| d.name.clone()).collect();
        let canon: Vec<String> = carrier_names(fv.len() + taken.len())
            .into_iter()
            .filter(|n| !taken.contains(n))
            .take(fv.len())
            .collect();
        let ren = |t: &TypeExpr| {
            t.rename(&|v| {
                fv.iter()
                    .position(|w| w == v)
                    .map(|i| canon[i].clone())
                    .unwrap_or_else(|| v.to_string())
            })
        };
        let sig = equal_obligation(&ren(x), &ren(k));
        let side = if kt_of(k).is_ktop() { x } else { k };
        let base = format!("{EQUAL}^{}KT", head_name(side));
        let mut name = base.clone();
        let mut n = 1;
        loop {
            match self.postulates.iter().find(|p| p.name == name) {
                Some(p) if p.signature.alpha_eq(&sig) => break,
                Some(_) => {
                    n += 1;
                    name = format!("{base}{n}");
                }
                None => {
                    self.postulates.push(Postulate {
                        name: name.clone(),
                        signature: sig,
                    });
                    break;
                }
            }
        }
        let mut args: Vec<WTerm> = fv.iter().map(|v| wty(term::var(v))).collect();
        args.push(e);
        wapp(WTerm::Postulate(name), args)
    }

    fn equal_map(&mut self, h: &str, n: usize) -> String {
        let name = equal_map_name(h);
        if self.auxiliary.iter().any(|p| p.name == name) {
            return name;
        }
        let cs = carrier_names(n);
        let q2 = |a: &str| format!("Q'_{a}");
        let mut bs: Vec<(String, Term)> = cs.iter().map(|a| (a.clone(), Term::Set)).collect();
        bs.extend(cs.iter().map(|a| (q_name(a), term::pred_ty(term::var(a)))));
        bs.extend(cs.iter().map(|a| (q2(a), term::pred_ty(term::var(a)))));
        let prems: Vec<Term> = cs
            .iter()
            .map(|a| {
                term::app(
                    term::lift(EQUAL),
                    vec![
                        term::var(a),
                        term::var(a),
                        term::var(&q_name(a)),
                        term::var(&q2(a)),
                        term::ctor("refl"),
                    ],
                )
            })
            .collect();
        let vars: Vec<Term> = cs.iter().map(|a| term::var(a)).collect();
        let lifted = |qs: Vec<Term>| {
            let mut xs = vars.clone();
            xs.extend(qs);
            term::app(term::lift(h), xs)
        };
        let concl = term::app(
            Term::PredMap,
            vec![
                term::app(term::data(h), vars.clone()),
                lifted(cs.iter().map(|a| term::var(&q_name(a))).collect()),
                lifted(cs.iter().map(|a| term::var(&q2(a))).collect()),
            ],
        );
        self.auxiliary.push(Postulate {
            name: name.clone(),
            signature: term::pis(&bs, term::arrows(prems, concl)),
        });
        name
    }

    /// Evidence that `x : t` satisfies the lifting of `t` at `K_T`.
    fn ty(&mut self, t: &TypeExpr, x: WTerm, fresh: &mut Fresh) -> WTerm {
        if kt_of(t).is_ktop() {
            return WTerm::TT;
        }
        match t {
            TypeExpr::Var(_) | TypeExpr::Unit => WTerm::TT,
            TypeExpr::Prod(a, b) => {
                let (x1, x2) = (fresh.next("x"), fresh.next("x"));
                let ea = self.ty(a, wvar(&x1), fresh);
                let eb = self.ty(b, wvar(&x2), fresh);
                WTerm::Case(
                    Box::new(x),
                    vec![(
                        wapp(WTerm::Ctor(",".into()), vec![wvar(&x1), wvar(&x2)]),
                        WTerm::Tuple(vec![ea, eb]),
                    )],
                )
            }
            TypeExpr::Sum(a, b) => {
                let y = fresh.next("x");
                let ea = self.ty(a, wvar(&y), fresh);
                let eb = self.ty(b, wvar(&y), fresh);
                WTerm::Case(
                    Box::new(x),
                    vec![
                        (wapp(WTerm::Ctor("inl".into()), vec![wvar(&y)]), ea),
                        (wapp(WTerm::Ctor("inr".into()), vec![wvar(&y)]), eb),
                    ],
                )
            }
            TypeExpr::Arrow(_, c) => {
                let (z, l) = (fresh.next("z"), fresh.next("l"));
                let body = self.ty(c, wapp(x, vec![wvar(&z)]), fresh);
                WTerm::Lam(vec![z, l], Box::new(body))
            }
            TypeExpr::Data(h, args) if h == EQUAL => self.cite(&args[0], &args[1], x),
            TypeExpr::Data(h, args) => {
                let types: Vec<WTerm> = args.iter().map(|a| wty(Term::from_type(a))).collect();
                let base = if h == self.g {
                    WTerm::SelfCall {
                        head: self.name.clone(),
                        args: types.clone(),
                        scrutinee: Some(Box::new(x.clone())),
                        evidence: None,
                    }
                } else {
                    let mut xs = types.clone();
                    xs.push(x.clone());
                    wapp(WTerm::Global(kt_name(h)), xs)
                };
                let preds: Vec<Term> = args.iter().map(kt_of).collect();
                if preds.iter().all(Term::is_ktop) {
                    return base;
                }
                let mut xs = types;
                xs.extend(args.iter().map(|a| wty(term::ktop(Term::from_type(a)))));
                xs.extend(preds.iter().cloned().map(wty));
                if has_map(h, self.env) {
                    for (a, p) in args.iter().zip(&preds) {
                        let (y, l) = (fresh.next("y"), fresh.next("l"));
                        let body = if p.is_ktop() {
                            wvar(&l)
                        } else {
                            self.ty(a, wvar(&y), fresh)
                        };
                        xs.push(WTerm::Lam(vec![y, l], Box::new(body)));
                    }
                    WTerm::MapCall {
                        map: map_name(h),
                        args: xs,
                        scrutinee: Box::new(x),
                        evidence: Box::new(base),
                    }
                } else {
                    let name = self.equal_map(h, args.len());
                    for (a, p) in args.iter().zip(&preds) {
                        if p.is_ktop() {
                            let v = fresh.next("a");
                            xs.push(WTerm::Lam(vec![v], Box::new(WTerm::Ctor("refl".into()))));
                        } else {
                            let v = TypeExpr::Var(fresh.next("X"));
                            let mut ev = self.cite(&v, a, WTerm::Ctor("refl".into()));
                            // the lemma's first carrier is the type itself
                            if let WTerm::App(_, ys) = &mut ev {
                                ys[0] = wty(Term::from_type(a));
                            }
                            xs.push(ev);
                        }
                    }
                    xs.push(x);
                    xs.push(base);
                    wapp(WTerm::Global(name), xs)
                }
            }
        }
    }

    /// Evidence for one kept conjunct of a clause.
    fn conjunct(&mut self, s: &ShapeF, x: WTerm, fresh: &mut Fresh, refl_at: &mut Option<String>) -> WTerm {
        if let ShapeF::Arrow(d, c) = s {
            let z = fresh.next("z");
            let mut vs = vec![z.clone()];
            if !kt_of(d).is_ktop() {
                vs.push(fresh.next("l"));
            }
            let body = self.conjunct(c, wapp(x, vec![wvar(&z)]), fresh, refl_at);
            return WTerm::Lam(vs, Box::new(body));
        }
        let t = s.to_type(self.g);
        if let (TypeExpr::Data(h, args), WTerm::Var(e)) = (&t, &x) {
            if h == EQUAL && kt_of(&args[0]).is_ktop() && kt_of(&args[1]).is_ktop() {
                // both sides constantly true: match the proof as refl
                *refl_at = Some(e.clone());
                let a = fresh.next("a");
                return WTerm::Lam(vec![a], Box::new(WTerm::Ctor("refl".into())));
            }
        }
        self.ty(&t, x, fresh)
    }
}

fn equal_kt(d: &DataDecl) -> KtWitness {
    let sig = equal_obligation(&TypeExpr::var("A"), &TypeExpr::var("B"));
    KtWitness {
        def: WitnessDef {
            name: kt_name(EQUAL),
            decl: d.name.clone(),
            kind: WitnessKind::Kt,
            signature: sig,
            clauses: vec![WClause {
                ctor: "refl".into(),
                lhs: vec![wvar("A"), wvar("A"), WTerm::Ctor("refl".into())],
                rhs: WTerm::Lam(vec!["a".into()], Box::new(WTerm::Ctor("refl".into()))),
            }],
        },
        postulates: vec![],
        auxiliary: vec![],
    }
}

fn replace_var(t: &WTerm, v: &str, by: &WTerm) -> WTerm {
    match t {
        WTerm::Var(x) if x == v => by.clone(),
        WTerm::App(h, xs) => WTerm::App(
            Box::new(replace_var(h, v, by)),
            xs.iter().map(|x| replace_var(x, v, by)).collect(),
        ),
        _ => t.clone(),
    }
}

/// The `G^KT` skeleton with the lemmas it postulates.
pub fn derive_kt_witness(d: &DataDecl, env: &Env) -> Result<KtWitness, Diagnostic> {
    derive_deep_rule(d, env)?;
    if d.is_equal() {
        return Ok(equal_kt(d));
    }
    let (hf, infos) = prepare(d, env)?;
    let cs = carrier_names(hf.arity);
    let signature = {
        let mut bs: Vec<(String, Term)> = cs.iter().map(|a| (a.clone(), Term::Set)).collect();
        let vars: Vec<Term> = cs.iter().map(|a| term::var(a)).collect();
        bs.push(("x".into(), term::app(term::data(&hf.name), vars.clone())));
        let mut xs = vars;
        xs.extend(cs.iter().map(|a| kt_pred(a)));
        xs.push(term::var("x"));
        term::pis(&bs, term::app(term::lift(&hf.name), xs))
    };
    let mut kt = Kt {
        g: &hf.name,
        env,
        name: kt_name(&hf.name),
        postulates: vec![],
        auxiliary: vec![],
    };
    let mut clauses = Vec::new();
    for ci in &infos {
        let mut fresh = Fresh::new(ci.scope());
        let mut ev: Vec<WTerm> = ci.others.iter().map(|b| wty(kt_pred(b))).collect();
        let mut refl_at = None;
        for (s, x) in kept_conjuncts(&hf.name, ci) {
            let mut r = None;
            ev.push(kt.conjunct(s, wvar(x), &mut fresh, &mut r));
            refl_at = refl_at.or(r);
        }
        let mut pat = pattern(ci);
        if let Some(e) = &refl_at {
            pat = replace_var(&pat, e, &WTerm::Ctor("refl".into()));
        }
        let mut lhs: Vec<WTerm> = ci.indices.iter().map(|a| wvar(a)).collect();
        lhs.push(pat);
        clauses.push(WClause {
            ctor: ci.name.clone(),
            lhs,
            rhs: tuple(ev),
        });
    }
    Ok(KtWitness {
        def: WitnessDef {
            name: kt_name(&hf.name),
            decl: hf.name.clone(),
            kind: WitnessKind::Kt,
            signature,
            clauses,
        },
        postulates: kt.postulates,
        auxiliary: kt.auxiliary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::diag::DiagCode;
    use crate::emit::text::wclause;
    use crate::witness::{check_witness, known_globals};

    fn env() -> Env {
        Env::from_source(corpus::ALL).unwrap()
    }

    fn clause(k: &KtWitness, c: &str) -> String {
        let cl = k.def.clauses.iter().find(|x| x.ctor == c).unwrap();
        wclause(&k.def.name, cl, Default::default())
    }

    #[test]
    fn lterm_postulates() {
        let env = env();
        let k = derive_kt_witness(env.get("LTerm").unwrap(), &env).unwrap();
        let names: Vec<String> = k.postulate_names().into_iter().collect();
        assert_eq!(names, ["Equal^ArrKT", "Equal^ListKT"]);
        assert_eq!(clause(&k, "var"), "LTerm^KT A (var s t_A) = LType^KT A t_A");
        assert_eq!(
            clause(&k, "abs"),
            "LTerm^KT A (abs B C e s t_B t_C) = (K_T, K_T, Equal^ArrKT A B C e, LType^KT B t_B, LTerm^KT C t_C)"
        );
        assert_eq!(
            clause(&k, "app"),
            "LTerm^KT A (app B t_BA t_B) = (K_T, LTerm^EqualMap (B -> A) K_T (Arr^ B A K_T K_T) \
             (Equal^ArrKT (B -> A) B A refl) t_BA (LTerm^KT (B -> A) t_BA), LTerm^KT B t_B)"
        );
        assert_eq!(
            clause(&k, "list"),
            "LTerm^KT A (list B e ts) = (K_T, Equal^ListKT A B e, \
             liftListMap (LTerm B) K_T (LTerm^ B K_T) (\\ y1 l1 -> LTerm^KT B y1) ts (List^KT (LTerm B) ts))"
        );
        let arr = &k.postulates.iter().find(|p| p.name == "Equal^ArrKT").unwrap().signature;
        assert_eq!(
            arr.to_string(),
            "forall (A B C : Set) (e : Equal A (B -> C)) -> Equal^ A (B -> C) K_T (Arr^ B C K_T K_T) e"
        );
        assert_eq!(
            k.auxiliary[0].signature.to_string(),
            "forall (A : Set) (Q_A Q'_A : A -> Set) -> Equal^ A A Q_A Q'_A refl -> PredMap (LTerm A) (LTerm^ A Q_A) (LTerm^ A Q'_A)"
        );
    }

    #[test]
    fn equal_needs_no_postulate() {
        let env = env();
        let k = derive_kt_witness(env.get(EQUAL).unwrap(), &env).unwrap();
        assert!(k.postulates.is_empty());
        assert_eq!(clause(&k, "refl"), "Equal^KT A A refl = \\ a -> refl");
    }

    #[test]
    fn seq_pair_postulate() {
        let env = Env::from_source(corpus::SEQ).unwrap();
        let k = derive_kt_witness(env.get("Seq").unwrap(), &env).unwrap();
        assert_eq!(k.postulate_names().into_iter().collect::<Vec<_>>(), ["Equal^PairKT"]);
        assert_eq!(
            clause(&k, "pair"),
            "Seq^KT A (pair B C e s_B s_C) = (K_T, K_T, Equal^PairKT A B C e, Seq^KT B s_B, Seq^KT C s_C)"
        );
    }

    #[test]
    fn trivial_equalities_match_refl() {
        let env = env();
        let k = derive_kt_witness(env.get("LType").unwrap(), &env).unwrap();
        assert_eq!(clause(&k, "bool"), "LType^KT A (bool B refl) = (K_T, \\ a1 -> refl)");
    }

    #[test]
    fn maps_avoid_postulates_for_nested_types() {
        let env = env();
        let k = derive_kt_witness(env.get("PTree").unwrap(), &env).unwrap();
        assert!(k.postulates.is_empty());
        assert!(
            clause(&k, "pnode").starts_with("PTree^KT A (pnode t_AA) = liftPTreeMap (A * A) K_T (Pair^ A A K_T K_T)")
        );
    }

    #[test]
    fn truly_nested_types_use_equal_map() {
        let env = env();
        let k = derive_kt_witness(env.get("Bush").unwrap(), &env).unwrap();
        assert_eq!(k.postulate_names().into_iter().collect::<Vec<_>>(), ["Equal^BushKT"]);
        assert_eq!(k.auxiliary[0].name, "Bush^EqualMap");
    }

    #[test]
    fn corpus_kt_witnesses_pass_checks() {
        let env = env();
        for d in env.all() {
            let k = derive_kt_witness(d, &env).unwrap();
            let mut extra: Vec<String> = k.postulate_names().into_iter().collect();
            extra.extend(k.auxiliary.iter().map(|p| p.name.clone()));
            let v = check_witness(&k.def, d, &known_globals(&env, &extra));
            assert_eq!(v, vec![], "{}", d.name);
        }
    }

    #[test]
    fn truly_nested_gadts_rejected() {
        let env = Env::from_source(corpus::NESTED_GADT).unwrap();
        let d = env.module_decls().last().unwrap();
        assert_eq!(derive_kt_witness(d, &env).unwrap_err().code, DiagCode::TrulyNestedGadt);
    }
}
