//! Witness terms: clause-by-clause definitions of the soundness proofs
//! `dIndG`, the lifting maps `liftHMap` and the `G^KT` functions.
//!
//! Witnesses are not type-checked here. They are checked for constructor
//! coverage, scoping and structural descent, which is what makes the
//! emitted recursion acceptable to a proof assistant's termination checker.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{DiagCode, Diagnostic};
use crate::induct::{derive_deep_rule, is_mono, P};
use crate::ir::{Classification, DataDecl, Env, ShapeF, TypeExpr, EQUAL};
use crate::lift::{carrier_names, lift_type, prepare, q_name, CtorInfo, ShapeCtx};
use crate::term::{self, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WTerm {
    Var(String),
    Ctor(String),
    /// A top-level name: another witness, a map, a postulate.
    Global(String),
    /// A carrier or predicate argument.
    Type(Term),
    TT,
    Tuple(Vec<WTerm>),
    App(Box<WTerm>, Vec<WTerm>),
    Lam(Vec<String>, Box<WTerm>),
    /// `case s of { pat -> body; ... }`; pattern variables are bound in the body.
    Case(Box<WTerm>, Vec<(WTerm, WTerm)>),
    /// Recursive call of the definition being written. Without a scrutinee
    /// it is a partial application used as a predicate morphism.
    SelfCall {
        head: String,
        args: Vec<WTerm>,
        scrutinee: Option<Box<WTerm>>,
        evidence: Option<Box<WTerm>>,
    },
    /// A lifting map applied to a datum and its evidence.
    MapCall {
        map: String,
        args: Vec<WTerm>,
        scrutinee: Box<WTerm>,
        evidence: Box<WTerm>,
    },
    /// One of the rule's hypotheses, `cc`.
    HypCall(String, Vec<WTerm>),
    Postulate(String),
}

pub fn wvar(n: &str) -> WTerm {
    WTerm::Var(n.to_string())
}

pub fn wty(t: Term) -> WTerm {
    WTerm::Type(t)
}

pub fn wapp(h: WTerm, args: Vec<WTerm>) -> WTerm {
    if args.is_empty() {
        return h;
    }
    match h {
        WTerm::App(h, mut xs) => {
            xs.extend(args);
            WTerm::App(h, xs)
        }
        h => WTerm::App(Box::new(h), args),
    }
}

/// Flat tuple, collapsing to the component or `tt` when short.
pub fn tuple(mut xs: Vec<WTerm>) -> WTerm {
    match xs.len() {
        0 => WTerm::TT,
        1 => xs.pop().expect("one element"),
        _ => WTerm::Tuple(xs),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Soundness,
    LiftMap,
    Kt,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::Soundness => "witness",
            WitnessKind::LiftMap => "liftmap",
            WitnessKind::Kt => "kt",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WClause {
    pub ctor: String,
    /// Arguments of the left-hand side, after the defined name.
    pub lhs: Vec<WTerm>,
    pub rhs: WTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessDef {
    pub name: String,
    pub decl: String,
    pub kind: WitnessKind,
    pub signature: Term,
    pub clauses: Vec<WClause>,
}

/// A named assumption with its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Postulate {
    pub name: String,
    pub signature: Term,
}

pub fn map_name(h: &str) -> String {
    format!("lift{h}Map")
}

pub fn kt_name(h: &str) -> String {
    format!("{h}^KT")
}

pub fn equal_map_name(h: &str) -> String {
    format!("{h}^EqualMap")
}

pub fn hyp_arg(ctor: &str) -> String {
    format!("c{ctor}")
}

fn lift_var(x: &str) -> String {
    format!("lift_{x}")
}

/// Types with a lifting map: ADTs and nested types, builtin or declared.
pub fn has_map(h: &str, env: &Env) -> bool {
    matches!(
        env.classification(h),
        Some(Classification::Adt | Classification::NestedType)
    ) && h != EQUAL
}

// ---------------------------------------------------------------------------
// soundness witness

struct Synth<'a> {
    d: &'a DataDecl,
    env: &'a Env,
    name: String,
    prefix: Vec<WTerm>,
    mono: bool,
}

impl Synth<'_> {
    fn self_call(&self, args: Vec<WTerm>, scrut: Option<WTerm>, ev: Option<WTerm>) -> WTerm {
        let mut all = self.prefix.clone();
        all.extend(args);
        WTerm::SelfCall {
            head: self.name.clone(),
            args: all,
            scrutinee: scrut.map(Box::new),
            evidence: ev.map(Box::new),
        }
    }

    fn rec_args(&self, args: &[TypeExpr], preds: &dyn Fn(&str) -> Term) -> Vec<WTerm> {
        if self.mono {
            return vec![];
        }
        let mut xs: Vec<WTerm> = args.iter().map(|a| wty(Term::from_type(a))).collect();
        xs.extend(args.iter().map(|a| wty(lift_type(a, preds))));
        xs
    }

    /// Morphism from the `G^`-evidence of `s` to its `P`-evidence, at `x`.
    fn morph(&self, s: &ShapeF, x: WTerm, l: WTerm, ci: &CtorInfo, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        let preds = ci.preds();
        Ok(match s {
            ShapeF::Const(_) => l,
            ShapeF::Rec(args) => self.self_call(self.rec_args(args, &preds), Some(x), Some(l)),
            ShapeF::TrueNest(_) => return Err(truly_nested_type(self.d)),
            ShapeF::Product(a, b) => {
                let (x1, x2, l1, l2) = (fresh.next("x"), fresh.next("x"), fresh.next("l"), fresh.next("l"));
                let pa = self.morph(a, wvar(&x1), wvar(&l1), ci, fresh)?;
                let pb = self.morph(b, wvar(&x2), wvar(&l2), ci, fresh)?;
                WTerm::Case(
                    Box::new(WTerm::Tuple(vec![x, l])),
                    vec![(
                        WTerm::Tuple(vec![
                            wapp(WTerm::Ctor(",".into()), vec![wvar(&x1), wvar(&x2)]),
                            WTerm::Tuple(vec![wvar(&l1), wvar(&l2)]),
                        ]),
                        WTerm::Tuple(vec![pa, pb]),
                    )],
                )
            }
            ShapeF::Sum(a, b) => {
                let (y, ly) = (fresh.next("x"), fresh.next("l"));
                let pa = self.morph(a, wvar(&y), wvar(&ly), ci, fresh)?;
                let pb = self.morph(b, wvar(&y), wvar(&ly), ci, fresh)?;
                let arm = |c: &str, body| {
                    (
                        WTerm::Tuple(vec![wapp(WTerm::Ctor(c.into()), vec![wvar(&y)]), wvar(&ly)]),
                        body,
                    )
                };
                WTerm::Case(Box::new(WTerm::Tuple(vec![x, l])), vec![arm("inl", pa), arm("inr", pb)])
            }
            ShapeF::Arrow(_, c) => {
                let (z, lz) = (fresh.next("z"), fresh.next("l"));
                let body = self.morph(
                    c,
                    wapp(x, vec![wvar(&z)]),
                    wapp(l, vec![wvar(&z), wvar(&lz)]),
                    ci,
                    fresh,
                )?;
                WTerm::Lam(vec![z, lz], Box::new(body))
            }
            ShapeF::Nested(h, ks) => {
                if !has_map(h, self.env) {
                    return Err(unsupported_map(h));
                }
                let g = &self.d.name;
                let lifted = ShapeCtx {
                    g,
                    p: term::lift(g),
                    mono: false,
                    preds: &preds,
                    taken: BTreeSet::new(),
                };
                let target = ShapeCtx {
                    g,
                    p: term::var(P),
                    mono: self.mono,
                    preds: &preds,
                    taken: BTreeSet::new(),
                };
                let mut args: Vec<WTerm> = ks.iter().map(|k| wty(Term::from_type(&k.to_type(g)))).collect();
                args.extend(ks.iter().map(|k| wty(lifted.pred(k))));
                args.extend(ks.iter().map(|k| wty(target.pred(k))));
                for k in ks {
                    let m = match k {
                        ShapeF::Rec(a) => self.self_call(self.rec_args(a, &preds), None, None),
                        _ => {
                            let (y, ly) = (fresh.next("y"), fresh.next("l"));
                            let body = self.morph(k, wvar(&y), wvar(&ly), ci, fresh)?;
                            WTerm::Lam(vec![y, ly], Box::new(body))
                        }
                    };
                    args.push(m);
                }
                WTerm::MapCall {
                    map: map_name(h),
                    args,
                    scrutinee: Box::new(x),
                    evidence: Box::new(l),
                }
            }
        })
    }

    /// Top-level conjunct morphism; a function argument whose domain
    /// premise was dropped takes only the point.
    fn morph_prop(
        &self,
        s: &ShapeF,
        x: WTerm,
        l: WTerm,
        ci: &CtorInfo,
        fresh: &mut Fresh,
    ) -> Result<WTerm, Diagnostic> {
        if let ShapeF::Arrow(d, c) = s {
            let preds = ci.preds();
            if lift_type(d, &preds).is_ktop() {
                let z = fresh.next("z");
                let body = self.morph_prop(c, wapp(x, vec![wvar(&z)]), wapp(l, vec![wvar(&z)]), ci, fresh)?;
                return Ok(WTerm::Lam(vec![z], Box::new(body)));
            }
            let lz = fresh.next("l");
            let z = fresh.next("z");
            let body = self.morph_prop(
                c,
                wapp(x, vec![wvar(&z)]),
                wapp(l, vec![wvar(&z), wvar(&lz)]),
                ci,
                fresh,
            )?;
            return Ok(WTerm::Lam(vec![z, lz], Box::new(body)));
        }
        self.morph(s, x, l, ci, fresh)
    }
}

/// Fresh local names, avoiding everything in scope.
pub(crate) struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    pub(crate) fn new(taken: BTreeSet<String>) -> Self {
        Fresh { taken }
    }

    pub(crate) fn next(&mut self, base: &str) -> String {
        let mut k = 1;
        let mut n = format!("{base}{k}");
        while self.taken.contains(&n) {
            k += 1;
            n = format!("{base}{k}");
        }
        self.taken.insert(n.clone());
        n
    }
}

/// Conjuncts kept in a clause of the lifting: (shape, argument name).
pub(crate) fn kept_conjuncts<'a>(g: &str, ci: &'a CtorInfo) -> Vec<(&'a ShapeF, &'a String)> {
    let preds = ci.preds();
    let ctx = ShapeCtx {
        g,
        p: term::lift(g),
        mono: false,
        preds: &preds,
        taken: ci.scope(),
    };
    ci.shapes
        .iter()
        .zip(&ci.args)
        .filter(|(s, x)| ctx.prop(s, term::var(x)).is_some())
        .collect()
}

fn truly_nested_type(d: &DataDecl) -> Diagnostic {
    Diagnostic::new(
        DiagCode::TrulyNestedType,
        format!(
            "{} is a truly nested type; its deep induction rule is stated but no witness is synthesised",
            d.name
        ),
    )
    .at(d.span)
    .explain("The witness would have to map evidence along the lifting of the rule predicate itself, which needs a functorial semantics for the type.")
}

fn unsupported_map(h: &str) -> Diagnostic {
    Diagnostic::new(
        DiagCode::UnsupportedMap,
        format!("{h} has no lifting map: only ADTs and nested types can map predicate morphisms"),
    )
}

/// `dIndG`: the proof that the deep induction rule is sound.
pub fn synth_witness(d: &DataDecl, env: &Env) -> Result<WitnessDef, Diagnostic> {
    let rule = derive_deep_rule(d, env)?;
    if d.classification == Classification::TrulyNestedType {
        return Err(truly_nested_type(d));
    }
    let name = rule.name.clone();
    let hyp_args: Vec<String> = rule.hypotheses.iter().map(|h| hyp_arg(&h.ctor)).collect();
    if d.is_equal() {
        let (a, q, q2, l) = (wvar("A"), wvar("Q"), wvar("Q'"), wvar("liftE"));
        let c = &hyp_args[0];
        return Ok(WitnessDef {
            name,
            decl: d.name.clone(),
            kind: WitnessKind::Soundness,
            signature: rule.statement,
            clauses: vec![WClause {
                ctor: "refl".into(),
                lhs: vec![
                    wvar(P),
                    wvar(c),
                    a.clone(),
                    a.clone(),
                    q.clone(),
                    q2.clone(),
                    WTerm::Ctor("refl".into()),
                    l.clone(),
                ],
                rhs: WTerm::HypCall(c.clone(), vec![a, q, q2, l]),
            }],
        });
    }
    let (hf, infos) = prepare(d, env)?;
    let mono = is_mono(&hf);
    let carriers = carrier_names(hf.arity);
    let mut prefix: Vec<WTerm> = Vec::new();
    if mono {
        prefix.extend(carriers.iter().map(|a| wvar(a)));
        prefix.push(wvar(P));
        prefix.extend(carriers.iter().map(|a| wvar(&q_name(a))));
    } else {
        prefix.push(wvar(P));
    }
    prefix.extend(hyp_args.iter().map(|c| wvar(c)));
    let synth = Synth {
        d: &hf,
        env,
        name: name.clone(),
        prefix: prefix.clone(),
        mono,
    };
    let mut clauses = Vec::new();
    for ci in &infos {
        let mut taken = ci.scope();
        taken.extend(hyp_args.iter().cloned());
        taken.insert(P.into());
        let mut fresh = Fresh::new(taken);
        let kept = kept_conjuncts(&hf.name, ci);
        let mut ev: Vec<WTerm> = ci.others.iter().map(|b| wvar(&q_name(b))).collect();
        ev.extend(kept.iter().map(|(_, x)| wvar(&lift_var(x))));
        let mut lhs = prefix.clone();
        if !mono {
            lhs.extend(ci.indices.iter().map(|a| wvar(a)));
            lhs.extend(ci.indices.iter().map(|a| wvar(&q_name(a))));
        }
        lhs.push(pattern(ci));
        lhs.push(tuple(ev));
        let mut args: Vec<WTerm> = Vec::new();
        if !mono {
            args.extend(ci.indices.iter().map(|a| wvar(a)));
        }
        args.extend(ci.others.iter().map(|b| wvar(b)));
        if !mono {
            args.extend(ci.indices.iter().map(|a| wvar(&q_name(a))));
        }
        args.extend(ci.others.iter().map(|b| wvar(&q_name(b))));
        args.extend(ci.args.iter().map(|x| wvar(x)));
        for (s, x) in &kept {
            args.push(synth.morph_prop(s, wvar(x), wvar(&lift_var(x)), ci, &mut fresh)?);
        }
        let c = hyp_arg(&ci.name);
        clauses.push(WClause {
            ctor: ci.name.clone(),
            lhs,
            rhs: WTerm::HypCall(c, args),
        });
    }
    Ok(WitnessDef {
        name,
        decl: d.name.clone(),
        kind: WitnessKind::Soundness,
        signature: rule.statement,
        clauses,
    })
}

pub(crate) fn pattern(ci: &CtorInfo) -> WTerm {
    let mut xs: Vec<WTerm> = ci.others.iter().map(|b| wvar(b)).collect();
    xs.extend(ci.args.iter().map(|x| wvar(x)));
    wapp(WTerm::Ctor(ci.name.clone()), xs)
}

// ---------------------------------------------------------------------------
// lifting maps

/// `liftHMap : forall A.. (Q Q' ..) -> PredMap A Q Q'.. -> PredMap (H A..) (H^ A.. Q..) (H^ A.. Q'..)`
pub fn derive_lift_map(h: &DataDecl, env: &Env) -> Result<WitnessDef, Diagnostic> {
    if !matches!(h.classification, Classification::Adt | Classification::NestedType) || h.is_equal() {
        return Err(unsupported_map(&h.name).at(h.span));
    }
    let (hf, infos) = prepare(h, env)?;
    let n = hf.arity;
    let carriers = carrier_names(n);
    let q2 = |a: &str| format!("Q'_{a}");
    let m = |a: &str| format!("m_{a}");
    let signature = {
        let mut bs: Vec<(String, Term)> = carriers.iter().map(|a| (a.clone(), Term::Set)).collect();
        bs.extend(carriers.iter().map(|a| (q_name(a), term::pred_ty(term::var(a)))));
        bs.extend(carriers.iter().map(|a| (q2(a), term::pred_ty(term::var(a)))));
        let morphs: Vec<Term> = carriers
            .iter()
            .map(|a| {
                term::app(
                    Term::PredMap,
                    vec![term::var(a), term::var(&q_name(a)), term::var(&q2(a))],
                )
            })
            .collect();
        let vars: Vec<Term> = carriers.iter().map(|a| term::var(a)).collect();
        let hty = term::app(term::data(&hf.name), vars.clone());
        let lifted = |qs: Vec<Term>| {
            let mut xs = vars.clone();
            xs.extend(qs);
            term::app(term::lift(&hf.name), xs)
        };
        let target = term::app(
            Term::PredMap,
            vec![
                hty,
                lifted(carriers.iter().map(|a| term::var(&q_name(a))).collect()),
                lifted(carriers.iter().map(|a| term::var(&q2(a))).collect()),
            ],
        );
        term::pis(&bs, term::arrows(morphs, target))
    };
    let name = map_name(&hf.name);
    let mut clauses = Vec::new();
    for ci in &infos {
        // the clause's index variables play the carriers
        let idx = &ci.indices;
        let mut taken = ci.scope();
        taken.extend(idx.iter().map(|a| q2(a)));
        taken.extend(idx.iter().map(|a| m(a)));
        let mut fresh = Fresh::new(taken);
        let mapper = Mapper {
            g: &hf.name,
            env,
            name: &name,
            indices: idx,
            m: &m,
            q2: &q2,
        };
        let kept = kept_conjuncts(&hf.name, ci);
        let mut ev_in: Vec<WTerm> = ci.others.iter().map(|b| wvar(&q_name(b))).collect();
        ev_in.extend(kept.iter().map(|(_, x)| wvar(&lift_var(x))));
        let mut ev_out: Vec<WTerm> = ci.others.iter().map(|b| wvar(&q_name(b))).collect();
        for (s, x) in &kept {
            ev_out.push(mapper.prop(s, wvar(x), wvar(&lift_var(x)), &mut fresh)?);
        }
        let mut lhs: Vec<WTerm> = idx.iter().map(|a| wvar(a)).collect();
        lhs.extend(idx.iter().map(|a| wvar(&q_name(a))));
        lhs.extend(idx.iter().map(|a| wvar(&q2(a))));
        lhs.extend(idx.iter().map(|a| wvar(&m(a))));
        lhs.push(pattern(ci));
        lhs.push(tuple(ev_in));
        clauses.push(WClause {
            ctor: ci.name.clone(),
            lhs,
            rhs: tuple(ev_out),
        });
    }
    Ok(WitnessDef {
        name,
        decl: hf.name.clone(),
        kind: WitnessKind::LiftMap,
        signature,
        clauses,
    })
}

struct Mapper<'a> {
    g: &'a str,
    env: &'a Env,
    name: &'a str,
    indices: &'a [String],
    m: &'a dyn Fn(&str) -> String,
    q2: &'a dyn Fn(&str) -> String,
}

impl Mapper<'_> {
    fn mentions_index(&self, t: &TypeExpr) -> bool {
        let mut fv = Vec::new();
        t.free_vars(&mut fv);
        fv.iter().any(|v| self.indices.contains(v))
    }

    fn q(&self, v: &str) -> Term {
        term::var(&q_name(v))
    }

    fn q2t(&self, v: &str) -> Term {
        if self.indices.iter().any(|a| a == v) {
            term::var(&(self.q2)(v))
        } else {
            self.q(v)
        }
    }

    fn prop(&self, s: &ShapeF, x: WTerm, l: WTerm, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        if let ShapeF::Arrow(d, c) = s {
            if self.mentions_index(d) {
                return Err(unsupported_map(self.g).explain(format!(
                    "the argument type {d} -> ... varies contravariantly in a parameter"
                )));
            }
            let z = fresh.next("z");
            let dropped = lift_type(d, &|v| self.q(v)).is_ktop();
            let (lz, lapp) = if dropped {
                (vec![z.clone()], wapp(l, vec![wvar(&z)]))
            } else {
                let lz = fresh.next("l");
                (vec![z.clone(), lz.clone()], wapp(l, vec![wvar(&z), wvar(&lz)]))
            };
            let body = self.prop(c, wapp(x, vec![wvar(&z)]), lapp, fresh)?;
            return Ok(WTerm::Lam(lz, Box::new(body)));
        }
        self.shape(s, x, l, fresh)
    }

    fn shape(&self, s: &ShapeF, x: WTerm, l: WTerm, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        match s {
            ShapeF::Const(t) => self.ty(t, x, l, fresh),
            ShapeF::Rec(args) => {
                let mut xs: Vec<WTerm> = args.iter().map(|a| wty(Term::from_type(a))).collect();
                xs.extend(args.iter().map(|a| wty(lift_type(a, &|v| self.q(v)))));
                xs.extend(args.iter().map(|a| wty(lift_type(a, &|v| self.q2t(v)))));
                for a in args {
                    xs.push(self.morphism(a, fresh)?);
                }
                Ok(WTerm::SelfCall {
                    head: self.name.to_string(),
                    args: xs,
                    scrutinee: Some(Box::new(x)),
                    evidence: Some(Box::new(l)),
                })
            }
            ShapeF::TrueNest(_) => Err(unsupported_map(self.g)),
            ShapeF::Nested(h, ks) => {
                if !has_map(h, self.env) {
                    return Err(unsupported_map(h));
                }
                let g = self.g;
                let q = |v: &str| self.q(v);
                let q2 = |v: &str| self.q2t(v);
                let from = ShapeCtx {
                    g,
                    p: term::lift(g),
                    mono: false,
                    preds: &q,
                    taken: BTreeSet::new(),
                };
                let to = ShapeCtx {
                    g,
                    p: term::lift(g),
                    mono: false,
                    preds: &q2,
                    taken: BTreeSet::new(),
                };
                let mut xs: Vec<WTerm> = ks.iter().map(|k| wty(Term::from_type(&k.to_type(g)))).collect();
                xs.extend(ks.iter().map(|k| wty(from.pred(k))));
                xs.extend(ks.iter().map(|k| wty(to.pred(k))));
                for k in ks {
                    let (y, ly) = (fresh.next("y"), fresh.next("l"));
                    let body = self.shape(k, wvar(&y), wvar(&ly), fresh)?;
                    xs.push(WTerm::Lam(vec![y, ly], Box::new(body)));
                }
                Ok(WTerm::MapCall {
                    map: map_name(h),
                    args: xs,
                    scrutinee: Box::new(x),
                    evidence: Box::new(l),
                })
            }
            ShapeF::Product(a, b) => self.pair(
                |f, y, ly, fr| f.shape(a, y, ly, fr),
                |f, y, ly, fr| f.shape(b, y, ly, fr),
                x,
                l,
                fresh,
            ),
            ShapeF::Sum(a, b) => self.either(
                |f, y, ly, fr| f.shape(a, y, ly, fr),
                |f, y, ly, fr| f.shape(b, y, ly, fr),
                x,
                l,
                fresh,
            ),
            ShapeF::Arrow(..) => self.prop_inner(s, x, l, fresh),
        }
    }

    /// A function argument nested inside another shape keeps its domain premise.
    fn prop_inner(&self, s: &ShapeF, x: WTerm, l: WTerm, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        let ShapeF::Arrow(d, c) = s else { unreachable!() };
        if self.mentions_index(d) {
            return Err(unsupported_map(self.g));
        }
        let (z, lz) = (fresh.next("z"), fresh.next("l"));
        let body = self.shape(c, wapp(x, vec![wvar(&z)]), wapp(l, vec![wvar(&z), wvar(&lz)]), fresh)?;
        Ok(WTerm::Lam(vec![z, lz], Box::new(body)))
    }

    fn morphism(&self, t: &TypeExpr, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        if let TypeExpr::Var(v) = t {
            if self.indices.contains(v) {
                return Ok(wvar(&(self.m)(v)));
            }
        }
        let (y, ly) = (fresh.next("y"), fresh.next("l"));
        let body = self.ty(t, wvar(&y), wvar(&ly), fresh)?;
        Ok(WTerm::Lam(vec![y, ly], Box::new(body)))
    }

    /// Map evidence for a G-free type from the `Q` lifting to the `Q'` one.
    fn ty(&self, t: &TypeExpr, x: WTerm, l: WTerm, fresh: &mut Fresh) -> Result<WTerm, Diagnostic> {
        if !self.mentions_index(t) {
            return Ok(l);
        }
        match t {
            TypeExpr::Var(v) => Ok(wapp(wvar(&(self.m)(v)), vec![x, l])),
            TypeExpr::Unit => Ok(l),
            TypeExpr::Prod(a, b) => self.pair(
                |f, y, ly, fr| f.ty(a, y, ly, fr),
                |f, y, ly, fr| f.ty(b, y, ly, fr),
                x,
                l,
                fresh,
            ),
            TypeExpr::Sum(a, b) => self.either(
                |f, y, ly, fr| f.ty(a, y, ly, fr),
                |f, y, ly, fr| f.ty(b, y, ly, fr),
                x,
                l,
                fresh,
            ),
            TypeExpr::Arrow(d, c) => {
                if self.mentions_index(d) {
                    return Err(unsupported_map(self.g));
                }
                let (z, lz) = (fresh.next("z"), fresh.next("l"));
                let body = self.ty(c, wapp(x, vec![wvar(&z)]), wapp(l, vec![wvar(&z), wvar(&lz)]), fresh)?;
                Ok(WTerm::Lam(vec![z, lz], Box::new(body)))
            }
            TypeExpr::Data(h, args) => {
                if !has_map(h, self.env) {
                    return Err(unsupported_map(h));
                }
                let mut xs: Vec<WTerm> = args.iter().map(|a| wty(Term::from_type(a))).collect();
                xs.extend(args.iter().map(|a| wty(lift_type(a, &|v| self.q(v)))));
                xs.extend(args.iter().map(|a| wty(lift_type(a, &|v| self.q2t(v)))));
                for a in args {
                    xs.push(self.morphism(a, fresh)?);
                }
                Ok(WTerm::MapCall {
                    map: map_name(h),
                    args: xs,
                    scrutinee: Box::new(x),
                    evidence: Box::new(l),
                })
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn pair(
        &self,
        fa: impl Fn(&Self, WTerm, WTerm, &mut Fresh) -> Result<WTerm, Diagnostic>,
        fb: impl Fn(&Self, WTerm, WTerm, &mut Fresh) -> Result<WTerm, Diagnostic>,
        x: WTerm,
        l: WTerm,
        fresh: &mut Fresh,
    ) -> Result<WTerm, Diagnostic> {
        let (x1, x2, l1, l2) = (fresh.next("x"), fresh.next("x"), fresh.next("l"), fresh.next("l"));
        let a = fa(self, wvar(&x1), wvar(&l1), fresh)?;
        let b = fb(self, wvar(&x2), wvar(&l2), fresh)?;
        Ok(WTerm::Case(
            Box::new(WTerm::Tuple(vec![x, l])),
            vec![(
                WTerm::Tuple(vec![
                    wapp(WTerm::Ctor(",".into()), vec![wvar(&x1), wvar(&x2)]),
                    WTerm::Tuple(vec![wvar(&l1), wvar(&l2)]),
                ]),
                WTerm::Tuple(vec![a, b]),
            )],
        ))
    }

    fn either(
        &self,
        fa: impl Fn(&Self, WTerm, WTerm, &mut Fresh) -> Result<WTerm, Diagnostic>,
        fb: impl Fn(&Self, WTerm, WTerm, &mut Fresh) -> Result<WTerm, Diagnostic>,
        x: WTerm,
        l: WTerm,
        fresh: &mut Fresh,
    ) -> Result<WTerm, Diagnostic> {
        let (y, ly) = (fresh.next("x"), fresh.next("l"));
        let a = fa(self, wvar(&y), wvar(&ly), fresh)?;
        let b = fb(self, wvar(&y), wvar(&ly), fresh)?;
        let arm = |c: &str, body| {
            (
                WTerm::Tuple(vec![wapp(WTerm::Ctor(c.into()), vec![wvar(&y)]), wvar(&ly)]),
                body,
            )
        };
        Ok(WTerm::Case(
            Box::new(WTerm::Tuple(vec![x, l])),
            vec![arm("inl", a), arm("inr", b)],
        ))
    }
}

// ---------------------------------------------------------------------------
// checks

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Coverage(String),
    Scope { clause: String, name: String },
    Descent { clause: String, call: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Coverage(m) => write!(f, "coverage: {m}"),
            Violation::Scope { clause, name } => write!(f, "clause {clause}: {name} is not in scope"),
            Violation::Descent { clause, call } => {
                write!(f, "clause {clause}: recursive call {call} is not on a strict subterm")
            }
        }
    }
}

/// Coverage, scoping and structural descent. `globals` are the names a
/// witness may cite besides its own locals.
pub fn check_witness(w: &WitnessDef, decl: &DataDecl, globals: &BTreeSet<String>) -> Vec<Violation> {
    let mut out = Vec::new();
    let want: Vec<&str> = decl.ctors.iter().map(|c| c.name.as_str()).collect();
    let got: Vec<&str> = w.clauses.iter().map(|c| c.ctor.as_str()).collect();
    if want != got {
        out.push(Violation::Coverage(format!(
            "{} has clauses for [{}] but {} has constructors [{}]",
            w.name,
            got.join(", "),
            decl.name,
            want.join(", ")
        )));
    }
    for c in &w.clauses {
        let mut bound = BTreeSet::new();
        for p in &c.lhs {
            pattern_vars(p, &mut bound);
        }
        let mut strict = BTreeSet::new();
        for p in &c.lhs {
            if let WTerm::App(h, args) = p {
                if matches!(**h, WTerm::Ctor(_)) {
                    args.iter().for_each(|a| pattern_vars(a, &mut strict));
                }
            }
        }
        // evidence components only ever shrink along with the datum
        let mut cx = CheckCx {
            clause: &c.ctor,
            globals,
            own: &w.name,
            out: &mut out,
        };
        for p in &c.lhs {
            cx.types_in_pattern(p, &bound);
        }
        cx.term(&c.rhs, &bound, &strict);
    }
    out
}

fn pattern_vars(p: &WTerm, out: &mut BTreeSet<String>) {
    match p {
        WTerm::Var(v) => {
            out.insert(v.clone());
        }
        WTerm::Tuple(xs) => xs.iter().for_each(|x| pattern_vars(x, out)),
        WTerm::App(h, xs) => {
            pattern_vars(h, out);
            xs.iter().for_each(|x| pattern_vars(x, out));
        }
        _ => {}
    }
}

struct CheckCx<'a> {
    clause: &'a str,
    globals: &'a BTreeSet<String>,
    own: &'a str,
    out: &'a mut Vec<Violation>,
}

impl CheckCx<'_> {
    fn scope(&mut self, name: &str) {
        self.out.push(Violation::Scope {
            clause: self.clause.to_string(),
            name: name.to_string(),
        });
    }

    fn types_in_pattern(&mut self, p: &WTerm, bound: &BTreeSet<String>) {
        if let WTerm::Type(t) = p {
            self.ty(t, bound);
        }
    }

    fn ty(&mut self, t: &Term, bound: &BTreeSet<String>) {
        for v in t.free_vars() {
            if !bound.contains(&v) {
                self.scope(&v);
            }
        }
    }

    /// Is `t` (a datum) a strict subterm of the clause's constructor pattern?
    fn derived(t: &WTerm, strict: &BTreeSet<String>) -> bool {
        match t {
            WTerm::Var(v) => strict.contains(v),
            WTerm::App(h, _) => Self::derived(h, strict),
            _ => false,
        }
    }

    fn term(&mut self, t: &WTerm, bound: &BTreeSet<String>, strict: &BTreeSet<String>) {
        match t {
            WTerm::Var(v) => {
                if !bound.contains(v) {
                    self.scope(v);
                }
            }
            WTerm::Ctor(_) | WTerm::TT => {}
            WTerm::Global(g) | WTerm::Postulate(g) => {
                if !self.globals.contains(g) && g != self.own {
                    self.scope(g);
                }
            }
            WTerm::Type(ty) => self.ty(ty, bound),
            WTerm::Tuple(xs) => xs.iter().for_each(|x| self.term(x, bound, strict)),
            WTerm::App(h, xs) => {
                self.term(h, bound, strict);
                xs.iter().for_each(|x| self.term(x, bound, strict));
            }
            WTerm::HypCall(c, xs) => {
                if !bound.contains(c) {
                    self.scope(c);
                }
                xs.iter().for_each(|x| self.term(x, bound, strict));
            }
            WTerm::Lam(vs, b) => {
                let mut inner = bound.clone();
                inner.extend(vs.iter().cloned());
                self.term(b, &inner, strict);
            }
            WTerm::Case(s, arms) => {
                self.term(s, bound, strict);
                let scrut_derived = match &**s {
                    WTerm::Tuple(xs) => xs.first().is_some_and(|x| Self::derived(x, strict)),
                    x => Self::derived(x, strict),
                };
                for (p, b) in arms {
                    let mut inner = bound.clone();
                    pattern_vars(p, &mut inner);
                    let mut st = strict.clone();
                    if scrut_derived {
                        pattern_vars(p, &mut st);
                    }
                    self.term(b, &inner, &st);
                }
            }
            WTerm::SelfCall {
                head,
                args,
                scrutinee,
                evidence,
            } => {
                if head != self.own {
                    self.scope(head);
                }
                args.iter().for_each(|x| self.term(x, bound, strict));
                match scrutinee {
                    Some(s) => {
                        self.term(s, bound, strict);
                        if !Self::derived(s, strict) {
                            self.out.push(Violation::Descent {
                                clause: self.clause.to_string(),
                                call: crate::emit::text::wterm(t, Default::default()),
                            });
                        }
                    }
                    None => {
                        // a bare partial call may only be handed to a map
                        self.out.push(Violation::Descent {
                            clause: self.clause.to_string(),
                            call: crate::emit::text::wterm(t, Default::default()),
                        });
                    }
                }
                if let Some(e) = evidence {
                    self.term(e, bound, strict);
                }
            }
            WTerm::MapCall {
                map,
                args,
                scrutinee,
                evidence,
            } => {
                if !self.globals.contains(map) {
                    self.scope(map);
                }
                let mapped = Self::derived(scrutinee, strict);
                for a in args {
                    match a {
                        WTerm::SelfCall {
                            scrutinee: None,
                            args,
                            head,
                            ..
                        } if mapped => {
                            if head != self.own {
                                self.scope(head);
                            }
                            args.iter().for_each(|x| self.term(x, bound, strict));
                        }
                        // the morphism's point ranges over elements of the mapped datum
                        WTerm::Lam(vs, b) if mapped => {
                            let mut inner = bound.clone();
                            inner.extend(vs.iter().cloned());
                            let mut st = strict.clone();
                            if let Some(v) = vs.first() {
                                st.insert(v.clone());
                            }
                            self.term(b, &inner, &st);
                        }
                        _ => self.term(a, bound, strict),
                    }
                }
                self.term(scrutinee, bound, strict);
                self.term(evidence, bound, strict);
            }
        }
    }
}

/// Names a witness over `env` may cite: maps, `K_T` witnesses and their
/// auxiliaries for every type in scope, plus `extra`.
pub fn known_globals(env: &Env, extra: &[String]) -> BTreeSet<String> {
    let mut g: BTreeSet<String> = extra.iter().cloned().collect();
    for d in env.all() {
        if has_map(&d.name, env) {
            g.insert(map_name(&d.name));
        }
        g.insert(kt_name(&d.name));
        g.insert(equal_map_name(&d.name));
    }
    for b in [crate::lift::PAIR, crate::lift::SUM, crate::lift::ARR] {
        g.insert(kt_name(b));
    }
    g
}

// ---------------------------------------------------------------------------
// alpha-equivalence

impl WClause {
    /// Locals renamed by order of binding.
    pub fn canonical(&self) -> WClause {
        let mut names = BTreeMap::new();
        let mut next = 0usize;
        let mut bind = |v: &str, names: &mut BTreeMap<String, String>| {
            if !names.contains_key(v) {
                names.insert(v.to_string(), format!("#{next}"));
                next += 1;
            }
        };
        let mut order = Vec::new();
        for p in &self.lhs {
            collect_pattern_order(p, &mut order);
        }
        for v in &order {
            bind(v, &mut names);
        }
        let lhs = self.lhs.iter().map(|p| canon(p, &names, &mut 0)).collect();
        let mut depth = names.len();
        WClause {
            ctor: self.ctor.clone(),
            lhs,
            rhs: canon(&self.rhs, &names, &mut depth),
        }
    }
}

fn collect_pattern_order(p: &WTerm, out: &mut Vec<String>) {
    match p {
        WTerm::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone())
            }
        }
        WTerm::Tuple(xs) => xs.iter().for_each(|x| collect_pattern_order(x, out)),
        WTerm::App(h, xs) => {
            collect_pattern_order(h, out);
            xs.iter().for_each(|x| collect_pattern_order(x, out));
        }
        _ => {}
    }
}

fn rename_type(t: &Term, names: &BTreeMap<String, String>) -> Term {
    // carrier and predicate arguments carry no binders of their own that
    // could shadow clause locals, so a free-variable rename is exact
    let fv = t.free_vars();
    let mut out = t.canonical();
    for v in fv {
        if let Some(n) = names.get(&v) {
            out = out.subst(&v, &term::var(n));
        }
    }
    out
}

fn canon(t: &WTerm, names: &BTreeMap<String, String>, depth: &mut usize) -> WTerm {
    let go = |t: &WTerm, depth: &mut usize| canon(t, names, depth);
    match t {
        WTerm::Var(v) => wvar(names.get(v).map(String::as_str).unwrap_or(v)),
        WTerm::Type(ty) => wty(rename_type(ty, names)),
        WTerm::Ctor(_) | WTerm::Global(_) | WTerm::TT | WTerm::Postulate(_) => t.clone(),
        WTerm::Tuple(xs) => WTerm::Tuple(xs.iter().map(|x| go(x, depth)).collect()),
        WTerm::App(h, xs) => wapp(go(h, depth), xs.iter().map(|x| go(x, depth)).collect()),
        WTerm::HypCall(c, xs) => WTerm::HypCall(
            names.get(c).cloned().unwrap_or_else(|| c.clone()),
            xs.iter().map(|x| go(x, depth)).collect(),
        ),
        WTerm::Lam(vs, b) => {
            let mut inner = names.clone();
            let mut fresh = Vec::new();
            for v in vs {
                let n = format!("#{depth}");
                *depth += 1;
                inner.insert(v.clone(), n.clone());
                fresh.push(n);
            }
            WTerm::Lam(fresh, Box::new(canon(b, &inner, depth)))
        }
        WTerm::Case(s, arms) => WTerm::Case(
            Box::new(go(s, depth)),
            arms.iter()
                .map(|(p, b)| {
                    let mut order = Vec::new();
                    collect_pattern_order(p, &mut order);
                    let mut inner = names.clone();
                    for v in order {
                        inner.insert(v, format!("#{depth}"));
                        *depth += 1;
                    }
                    (canon(p, &inner, depth), canon(b, &inner, depth))
                })
                .collect(),
        ),
        WTerm::SelfCall {
            head,
            args,
            scrutinee,
            evidence,
        } => WTerm::SelfCall {
            head: head.clone(),
            args: args.iter().map(|x| go(x, depth)).collect(),
            scrutinee: scrutinee.as_ref().map(|s| Box::new(go(s, depth))),
            evidence: evidence.as_ref().map(|s| Box::new(go(s, depth))),
        },
        WTerm::MapCall {
            map,
            args,
            scrutinee,
            evidence,
        } => WTerm::MapCall {
            map: map.clone(),
            args: args.iter().map(|x| go(x, depth)).collect(),
            scrutinee: Box::new(go(scrutinee, depth)),
            evidence: Box::new(go(evidence, depth)),
        },
    }
}

impl WitnessDef {
    /// Equal up to renaming of clause locals.
    pub fn alpha_eq(&self, other: &WitnessDef) -> bool {
        self.name == other.name
            && self.signature.alpha_eq(&other.signature)
            && self.clauses.len() == other.clauses.len()
            && self
                .clauses
                .iter()
                .zip(&other.clauses)
                .all(|(a, b)| a.canonical() == b.canonical())
    }
}

impl std::fmt::Display for WTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::emit::text::wterm(self, Default::default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn env() -> Env {
        Env::from_source(corpus::ALL).unwrap()
    }

    fn clause(w: &WitnessDef, c: &str) -> String {
        let cl = w.clauses.iter().find(|x| x.ctor == c).unwrap();
        crate::emit::text::wclause(&w.name, cl, Default::default())
    }

    #[test]
    fn equal_witness() {
        let env = env();
        let w = synth_witness(env.get(EQUAL).unwrap(), &env).unwrap();
        assert_eq!(
            clause(&w, "refl"),
            "dIndEqual P crefl A A Q Q' refl liftE = crefl A Q Q' liftE"
        );
    }

    #[test]
    fn seq_witness() {
        let env = Env::from_source(corpus::SEQ).unwrap();
        let w = synth_witness(env.get("Seq").unwrap(), &env).unwrap();
        assert_eq!(
            clause(&w, "const"),
            "dIndSeq P cconst cpair A Q_A (const a) lift_a = cconst A Q_A a lift_a"
        );
        assert_eq!(
            clause(&w, "pair"),
            "dIndSeq P cconst cpair A Q_A (pair B C e s_B s_C) (Q_B, Q_C, lift_e, lift_s_B, lift_s_C) = \
             cpair A B C Q_A Q_B Q_C e s_B s_C lift_e (dIndSeq P cconst cpair B Q_B s_B lift_s_B) \
             (dIndSeq P cconst cpair C Q_C s_C lift_s_C)"
        );
        let globals = known_globals(&env, &[]);
        assert!(check_witness(&w, env.get("Seq").unwrap(), &globals).is_empty());
    }

    #[test]
    fn lterm_list_clause_maps_over_list() {
        let env = env();
        let w = synth_witness(env.get("LTerm").unwrap(), &env).unwrap();
        assert_eq!(
            clause(&w, "list"),
            "dIndLTerm P cvar cabs capp clist A Q_A (list B e ts) (Q_B, lift_e, lift_ts) = \
             clist A B Q_A Q_B e ts lift_e \
             (liftListMap (LTerm B) (LTerm^ B Q_B) (P B Q_B) (dIndLTerm P cvar cabs capp clist B Q_B) ts lift_ts)"
        );
        assert!(
            clause(&w, "app").contains("(dIndLTerm P cvar cabs capp clist (B -> A) (Arr^ B A Q_B Q_A) t_BA lift_t_BA)")
        );
        let globals = known_globals(&env, &[]);
        assert_eq!(check_witness(&w, env.get("LTerm").unwrap(), &globals), vec![]);
    }

    #[test]
    fn list_map() {
        let env = env();
        let m = derive_lift_map(env.get("List").unwrap(), &env).unwrap();
        assert_eq!(clause(&m, "nil"), "liftListMap A Q_A Q'_A m_A nil tt = tt");
        assert_eq!(
            clause(&m, "cons"),
            "liftListMap A Q_A Q'_A m_A (cons a as) (lift_a, lift_as) = \
             (m_A a lift_a, liftListMap A Q_A Q'_A m_A as lift_as)"
        );
        assert_eq!(
            m.signature.to_string(),
            "forall (A : Set) (Q_A Q'_A : A -> Set) -> PredMap A Q_A Q'_A -> PredMap (List A) (List^ A Q_A) (List^ A Q'_A)"
        );
    }

    #[test]
    fn gadts_and_truly_nested_types_have_no_map() {
        let env = env();
        for n in ["LTerm", "Bush", "Equal"] {
            assert_eq!(
                derive_lift_map(env.get(n).unwrap(), &env).unwrap_err().code,
                DiagCode::UnsupportedMap
            );
        }
        assert_eq!(
            synth_witness(env.get("Bush").unwrap(), &env).unwrap_err().code,
            DiagCode::TrulyNestedType
        );
    }

    #[test]
    fn descent_violation_detected() {
        let env = Env::from_source(corpus::SEQ).unwrap();
        let mut w = synth_witness(env.get("Seq").unwrap(), &env).unwrap();
        // recurse on the whole pattern instead of a component
        let WTerm::HypCall(_, args) = &mut w.clauses[1].rhs else {
            panic!()
        };
        if let Some(WTerm::SelfCall { scrutinee, .. }) = args.last_mut() {
            *scrutinee = Some(Box::new(wvar("A")));
        }
        let v = check_witness(&w, env.get("Seq").unwrap(), &known_globals(&env, &[]));
        assert!(v.iter().any(|x| matches!(x, Violation::Descent { .. })), "{v:?}");
    }

    fn rename(t: &WTerm, from: &str, to: &str) -> WTerm {
        let r = |t: &WTerm| rename(t, from, to);
        match t {
            WTerm::Var(v) if v == from => wvar(to),
            WTerm::Tuple(xs) => WTerm::Tuple(xs.iter().map(r).collect()),
            WTerm::App(h, xs) => WTerm::App(Box::new(r(h)), xs.iter().map(r).collect()),
            WTerm::Lam(vs, b) => WTerm::Lam(
                vs.iter()
                    .map(|v| if v == from { to.to_string() } else { v.clone() })
                    .collect(),
                Box::new(r(b)),
            ),
            WTerm::HypCall(c, xs) => WTerm::HypCall(c.clone(), xs.iter().map(r).collect()),
            WTerm::SelfCall {
                head,
                args,
                scrutinee,
                evidence,
            } => WTerm::SelfCall {
                head: head.clone(),
                args: args.iter().map(r).collect(),
                scrutinee: scrutinee.as_ref().map(|s| Box::new(r(s))),
                evidence: evidence.as_ref().map(|s| Box::new(r(s))),
            },
            WTerm::MapCall {
                map,
                args,
                scrutinee,
                evidence,
            } => WTerm::MapCall {
                map: map.clone(),
                args: args.iter().map(r).collect(),
                scrutinee: Box::new(r(scrutinee)),
                evidence: Box::new(r(evidence)),
            },
            WTerm::Case(s, arms) => WTerm::Case(Box::new(r(s)), arms.iter().map(|(p, b)| (r(p), r(b))).collect()),
            _ => t.clone(),
        }
    }

    #[test]
    fn alpha_equivalence_of_clauses() {
        let env = env();
        let w = derive_lift_map(env.get("Rose").unwrap(), &env).unwrap();
        let mut renamed = w.clone();
        for c in &mut renamed.clauses {
            c.lhs = c.lhs.iter().map(|p| rename(p, "a", "zz")).collect();
            c.rhs = rename(&rename(&c.rhs, "a", "zz"), "y1", "w");
        }
        assert_ne!(w, renamed);
        assert!(w.alpha_eq(&renamed));
        let mut broken = renamed.clone();
        broken.clauses[1].rhs = rename(&broken.clauses[1].rhs, "zz", "a");
        assert!(!w.alpha_eq(&broken));
    }

    #[test]
    fn corpus_witnesses_pass_checks() {
        let env = env();
        let globals = known_globals(&env, &[]);
        for d in env.all() {
            match synth_witness(d, &env) {
                Ok(w) => assert_eq!(check_witness(&w, d, &globals), vec![], "{}", d.name),
                Err(e) => assert_eq!(e.code, DiagCode::TrulyNestedType, "{}", d.name),
            }
            if let Ok(m) = derive_lift_map(d, &env) {
                assert_eq!(check_witness(&m, d, &globals), vec![], "{}", d.name);
            }
        }
    }

    #[test]
    #[ignore]
    fn dump() {
        let env = env();
        for d in env.all() {
            for w in [synth_witness(d, &env), derive_lift_map(d, &env)].into_iter().flatten() {
                for c in &w.clauses {
                    println!("{}", crate::emit::text::wclause(&w.name, c, Default::default()));
                }
            }
        }
    }
}
