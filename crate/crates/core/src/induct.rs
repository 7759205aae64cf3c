//! Induction hypotheses and rules.
//!
//! Every declaration gets a deep rule quantified over a predicate `P` that
//! also receives the custom predicates `Q` on the carriers, and a structural
//! rule obtained by fixing every custom predicate to `K_T`. Plain ADTs get
//! monomorphic rules (`P : G A -> Set`); everything else quantifies over
//! all instances of `G` at once.

use crate::diag::Diagnostic;
use crate::ir::{Classification, DataDecl, Env, ShapeF, TypeExpr, EQUAL};
use crate::lift::{carrier_names, lift_type, prepare, q_name, CtorInfo, ShapeCtx};
use crate::term::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Deep,
    Structural,
}

impl RuleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleKind::Deep => "deep",
            RuleKind::Structural => "structural",
        }
    }
}

/// `dIndC`: what constructor `c` must do to respect `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub ctor: String,
    /// An abstraction over the rule parameters.
    pub term: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDef {
    pub name: String,
    pub decl: String,
    pub kind: RuleKind,
    pub hypotheses: Vec<Hypothesis>,
    /// Hypotheses appear as `dIndC P` (or `dIndC A P Q` for ADTs).
    pub statement: Term,
}

impl RuleDef {
    /// The statement with every hypothesis reference unfolded.
    pub fn inlined(&self) -> Term {
        self.statement.map_bottom_up(&|t| {
            if let Term::App(head, args) = &t {
                let Term::Hyp(n) = &**head else { return t };
                if let Some(h) = self.hypotheses.iter().find(|h| &h.name == n) {
                    return app(h.term.clone(), args.clone()).beta();
                }
            }
            t
        })
    }
}

fn capitalise(s: &str) -> String {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

pub fn hyp_name(kind: RuleKind, ctor: &str) -> String {
    match kind {
        RuleKind::Deep => format!("dInd{}", capitalise(ctor)),
        RuleKind::Structural => format!("ind{}", capitalise(ctor)),
    }
}

pub fn rule_name(kind: RuleKind, decl: &str) -> String {
    match kind {
        RuleKind::Deep => format!("dInd{decl}"),
        RuleKind::Structural => format!("ind{decl}"),
    }
}

pub(crate) const P: &str = "P";

/// Plain ADTs get monomorphic rules.
pub fn is_mono(d: &DataDecl) -> bool {
    d.classification == Classification::Adt && !d.is_equal()
}

/// The structural predicate keeps its predicate slots when `P` itself is
/// lifted (truly nested types), since `P A K_T` is not constantly true.
fn keeps_slots(d: &DataDecl) -> bool {
    d.classification == Classification::TrulyNestedType
}

fn carriers(n: usize) -> (Vec<String>, Vec<Term>) {
    let names = carrier_names(n);
    let vars = names.iter().map(|a| var(a)).collect();
    (names, vars)
}

fn set_binders(names: &[String]) -> Vec<(String, Term)> {
    names.iter().map(|a| (a.clone(), Term::Set)).collect()
}

fn pred_binders(names: &[String]) -> Vec<(String, Term)> {
    names.iter().map(|a| (q_name(a), pred_ty(var(a)))).collect()
}

fn ktop_of(v: &str) -> Term {
    ktop(var(v))
}

/// Type of the rule predicate.
fn p_type(d: &DataDecl, kind: RuleKind) -> Term {
    let (names, vars) = carriers(d.arity);
    let g = app(data(&d.name), vars.clone());
    if is_mono(d) {
        return pred_ty(g);
    }
    let slots = kind == RuleKind::Deep || keeps_slots(d);
    let preds = if slots {
        vars.iter().map(|v| pred_ty(v.clone())).collect()
    } else {
        vec![]
    };
    pis(&set_binders(&names), arrows(preds, pred_ty(g)))
}

/// Mono rules abstract hypotheses over `A.. P Q..`; the rest over `P`.
fn rule_params(d: &DataDecl, kind: RuleKind) -> Vec<(String, Term)> {
    if !is_mono(d) {
        return vec![(P.into(), p_type(d, kind))];
    }
    let (names, _) = carriers(d.arity);
    let mut ps = set_binders(&names);
    ps.push((P.into(), p_type(d, kind)));
    if kind == RuleKind::Deep {
        ps.extend(pred_binders(&names));
    }
    ps
}

fn hyp_refs(hyps: &[Hypothesis], params: &[(String, Term)]) -> Vec<Term> {
    let args: Vec<Term> = params.iter().map(|(n, _)| var(n)).collect();
    hyps.iter()
        .map(|h| app(Term::Hyp(h.name.clone()), args.clone()))
        .collect()
}

/// `forall P -> hyps -> forall A.. Q.. (y : G A..) -> G^ A.. Q.. y -> P A.. Q.. y`,
/// with the pieces that the rule kind and monomorphism drop left out.
fn assemble(d: &DataDecl, kind: RuleKind, hyps: Vec<Hypothesis>) -> RuleDef {
    let params = rule_params(d, kind);
    let (names, vars) = carriers(d.arity);
    let y = crate::lift::arg_base(&TypeExpr::data(
        &d.name,
        names.iter().map(|a| TypeExpr::var(a)).collect(),
    ));
    let g = app(data(&d.name), vars.clone());
    let qs: Vec<Term> = names.iter().map(|a| var(&q_name(a))).collect();
    let mono = is_mono(d);
    let mut concl_binders = Vec::new();
    if !mono {
        concl_binders.extend(set_binders(&names));
        if kind == RuleKind::Deep {
            concl_binders.extend(pred_binders(&names));
        }
    }
    concl_binders.push((y.clone(), g));
    let p_args: Vec<Term> = match (mono, kind) {
        (true, _) => vec![],
        (false, RuleKind::Deep) => vars.iter().cloned().chain(qs.iter().cloned()).collect(),
        (false, RuleKind::Structural) if keeps_slots(d) => {
            vars.iter().cloned().chain(names.iter().map(|a| ktop_of(a))).collect()
        }
        (false, RuleKind::Structural) => vars.clone(),
    };
    let mut concl_p = p_args;
    concl_p.push(var(&y));
    let concl_p = app(var(P), concl_p);
    let concl = match kind {
        RuleKind::Deep => {
            let mut l = vars.clone();
            l.extend(qs);
            l.push(var(&y));
            arrow(app(lift(&d.name), l), concl_p)
        }
        RuleKind::Structural => concl_p,
    };
    let statement = pis(&params, arrows(hyp_refs(&hyps, &params), pis(&concl_binders, concl)));
    RuleDef {
        name: rule_name(kind, &d.name),
        decl: d.name.clone(),
        kind,
        hypotheses: hyps,
        statement,
    }
}

fn equal_hypothesis(kind: RuleKind) -> Hypothesis {
    let pty = p_type(&equal_decl(), kind);
    let (c, q, q2) = (var("C"), var("Q"), var("Q'"));
    let refl = ctor("refl");
    let body = match kind {
        RuleKind::Deep => pis(
            &[
                ("C".into(), Term::Set),
                ("Q".into(), pred_ty(c.clone())),
                ("Q'".into(), pred_ty(c.clone())),
            ],
            arrow(
                app(
                    lift(EQUAL),
                    vec![c.clone(), c.clone(), q.clone(), q2.clone(), refl.clone()],
                ),
                app(var(P), vec![c.clone(), c.clone(), q, q2, refl]),
            ),
        ),
        RuleKind::Structural => pi("C", Term::Set, app(var(P), vec![c.clone(), c, refl])),
    };
    Hypothesis {
        name: hyp_name(kind, "refl"),
        ctor: "refl".into(),
        term: lam(P, pty, body),
    }
}

fn equal_decl() -> DataDecl {
    Env::prelude().get(EQUAL).expect("prelude declares Equal").clone()
}

/// Premise-forming context for one constructor of a rule.
struct RuleCtor<'a> {
    d: &'a DataDecl,
    ci: &'a CtorInfo,
    kind: RuleKind,
}

impl RuleCtor<'_> {
    fn mono(&self) -> bool {
        is_mono(self.d)
    }

    /// Index and explicit binders, their predicates (deep only), and arguments.
    fn binders(&self) -> Vec<(String, Term)> {
        let ci = self.ci;
        let mut bs = Vec::new();
        if !self.mono() {
            bs.extend(set_binders(&ci.indices));
        }
        bs.extend(set_binders(&ci.others));
        if self.kind == RuleKind::Deep {
            if !self.mono() {
                bs.extend(pred_binders(&ci.indices));
            }
            bs.extend(pred_binders(&ci.others));
        }
        bs.extend(
            ci.args
                .iter()
                .zip(&ci.domain)
                .map(|(x, t)| (x.clone(), Term::from_type(t))),
        );
        bs
    }

    fn conclusion(&self) -> Term {
        let ci = self.ci;
        let mut args: Vec<Term> = Vec::new();
        if !self.mono() {
            args.extend(ci.indices.iter().map(|a| var(a)));
            match self.kind {
                RuleKind::Deep => args.extend(ci.indices.iter().map(|a| var(&q_name(a)))),
                RuleKind::Structural if keeps_slots(self.d) => args.extend(ci.indices.iter().map(|a| ktop_of(a))),
                RuleKind::Structural => {}
            }
        }
        args.push(ci.pattern());
        app(var(P), args)
    }

    fn deep_premises(&self) -> Vec<Term> {
        let preds = self.ci.preds();
        let ctx = ShapeCtx {
            g: &self.d.name,
            p: var(P),
            mono: self.mono(),
            preds: &preds,
            taken: self.ci.scope(),
        };
        self.ci
            .shapes
            .iter()
            .zip(&self.ci.args)
            .filter_map(|(s, x)| ctx.prop(s, var(x)))
            .collect()
    }

    fn structural_premises(&self) -> Vec<Term> {
        let taken = self.ci.scope();
        self.ci
            .shapes
            .iter()
            .zip(&self.ci.args)
            .filter_map(|(s, x)| self.structural_prop(s, var(x), &taken))
            .collect()
    }

    fn structural_prop(&self, s: &ShapeF, x: Term, taken: &std::collections::BTreeSet<String>) -> Option<Term> {
        if let ShapeF::Arrow(d, c) = s {
            let z = fresh_name("z", taken);
            let body = self.structural_prop(c, app(x, vec![var(&z)]), taken)?;
            return Some(pi(&z, Term::from_type(d), body));
        }
        let (p, trivial) = self.structural_pred(s);
        (!trivial).then(|| app(p, vec![x]))
    }

    /// The predicate on a shape with every custom predicate at `K_T`, and
    /// whether it is constantly true.
    fn structural_pred(&self, s: &ShapeF) -> (Term, bool) {
        let g = &self.d.name;
        let ty = |s: &ShapeF| Term::from_type(&s.to_type(g));
        let kt = |t: &TypeExpr| lift_type(t, &ktop_of);
        let keep = keeps_slots(self.d);
        let binop = |h: &str, a: &ShapeF, b: &ShapeF| {
            let (pa, ka) = self.structural_pred(a);
            let (pb, kb) = self.structural_pred(b);
            (app(lift(h), vec![ty(a), ty(b), pa, pb]), ka && kb)
        };
        match s {
            ShapeF::Const(t) => (kt(t), true),
            ShapeF::Rec(_) if self.mono() => (var(P), false),
            ShapeF::Rec(args) => {
                let mut xs: Vec<Term> = args.iter().map(Term::from_type).collect();
                if keep {
                    xs.extend(args.iter().map(kt));
                }
                (app(var(P), xs), false)
            }
            ShapeF::TrueNest(ks) => {
                let mut xs: Vec<Term> = ks.iter().map(ty).collect();
                xs.extend(ks.iter().map(|k| self.structural_pred(k).0));
                (app(var(P), xs), false)
            }
            ShapeF::Nested(h, ks) => {
                let parts: Vec<(Term, bool)> = ks.iter().map(|k| self.structural_pred(k)).collect();
                let mut xs: Vec<Term> = ks.iter().map(ty).collect();
                xs.extend(parts.iter().map(|(p, _)| p.clone()));
                (app(lift(h), xs), parts.iter().all(|(_, k)| *k))
            }
            ShapeF::Product(a, b) => binop(crate::lift::PAIR, a, b),
            ShapeF::Sum(a, b) => binop(crate::lift::SUM, a, b),
            ShapeF::Arrow(d, c) => {
                let (pc, kc) = self.structural_pred(c);
                (
                    app(lift(crate::lift::ARR), vec![Term::from_type(d), ty(c), kt(d), pc]),
                    kc,
                )
            }
        }
    }

    fn hypothesis(&self, params: &[(String, Term)]) -> Hypothesis {
        let prems = match self.kind {
            RuleKind::Deep => self.deep_premises(),
            RuleKind::Structural => self.structural_premises(),
        };
        let body = pis(&self.binders(), arrows(prems, self.conclusion()));
        Hypothesis {
            name: hyp_name(self.kind, &self.ci.name),
            ctor: self.ci.name.clone(),
            term: lams(params, body),
        }
    }
}

/// One hypothesis per constructor, in declaration order.
pub fn derive_hypotheses(d: &DataDecl, env: &Env, kind: RuleKind) -> Result<Vec<Hypothesis>, Diagnostic> {
    if d.is_equal() {
        return Ok(vec![equal_hypothesis(kind)]);
    }
    let (hf, infos) = prepare(d, env)?;
    let params = rule_params(&hf, kind);
    Ok(infos
        .iter()
        .map(|ci| RuleCtor { d: &hf, ci, kind }.hypothesis(&params))
        .collect())
}

pub fn derive_deep_rule(d: &DataDecl, env: &Env) -> Result<RuleDef, Diagnostic> {
    let hyps = derive_hypotheses(d, env, RuleKind::Deep)?;
    Ok(assemble(d, RuleKind::Deep, hyps))
}

/// The structural rule, generated directly from the shapes (not by
/// simplifying the deep rule; see [`crate::simplify`] for that route).
pub fn derive_structural_rule(d: &DataDecl, env: &Env) -> Result<RuleDef, Diagnostic> {
    let hyps = derive_hypotheses(d, env, RuleKind::Structural)?;
    Ok(assemble(d, RuleKind::Structural, hyps))
}
