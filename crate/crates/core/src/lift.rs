//! Predicate liftings.
//!
//! `G^ A Q x` holds when `Q` holds of every primitive datum of type `A`
//! stored in `x`. Builtin type formers have fixed liftings; declared types
//! get one clause per constructor, read off the constructor's shapes.

use std::collections::BTreeSet;

use crate::diag::{DiagCode, Diagnostic};
use crate::encode::{henry_ford, type_names};
use crate::ir::{decl_shapes, Classification, ConstructorDecl, DataDecl, Env, ShapeF, TypeExpr, EQUAL};
use crate::term::*;

pub const PAIR: &str = "Pair";
pub const SUM: &str = "Sum";
pub const ARR: &str = "Arr";
pub const UNIT: &str = "Unit";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingDef {
    /// The type former being lifted.
    pub name: String,
    /// Head used in clause left-hand sides: `Lift(name)`, or `KTop` itself.
    pub head: Term,
    pub signature: Term,
    pub clauses: Vec<LiftClause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftClause {
    pub ctor: String,
    /// Carrier and predicate arguments of the left-hand side.
    pub params: Vec<Term>,
    pub pattern: Term,
    /// Typed pattern variables, in binding order.
    pub binders: Vec<(String, Term)>,
    pub body: Term,
}

impl LiftingDef {
    /// The clause as an equation `head params pattern = body`.
    pub fn lhs(&self, c: &LiftClause) -> Term {
        let mut args = c.params.clone();
        args.push(c.pattern.clone());
        app(self.head.clone(), args)
    }
}

/// Names `A, B, C, ...` for the carriers of an arity-`n` signature.
pub fn carrier_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0..=25 => ((b'A' + i as u8) as char).to_string(),
            _ => format!("A{i}"),
        })
        .collect()
}

/// `forall (A.. : Set) -> (A -> Set).. -> T A.. -> Set`
pub fn lifting_signature(carrier: &dyn Fn(Vec<Term>) -> Term, n: usize) -> Term {
    let names = carrier_names(n);
    let vars: Vec<Term> = names.iter().map(|a| var(a)).collect();
    let preds: Vec<Term> = vars.iter().map(|v| pred_ty(v.clone())).collect();
    let body = arrows(preds, arrow(carrier(vars), Term::Set));
    pis(&names.iter().map(|a| (a.clone(), Term::Set)).collect::<Vec<_>>(), body)
}

pub fn q_name(v: &str) -> String {
    format!("Q_{v}")
}

fn clause(ctor: &str, params: Vec<Term>, pattern: Term, binders: Vec<(&str, Term)>, body: Term) -> LiftClause {
    LiftClause {
        ctor: ctor.to_string(),
        params,
        pattern,
        binders: binders.into_iter().map(|(n, t)| (n.to_string(), t)).collect(),
        body,
    }
}

/// Fixed liftings of the builtin type formers.
pub fn builtin_lifting(name: &str) -> Result<LiftingDef, Diagnostic> {
    let (a, b, qa, qb) = (var("A"), var("B"), var("Q_A"), var("Q_B"));
    let pa = pred_ty(a.clone());
    let pb = pred_ty(b.clone());
    let two = |c: &dyn Fn(Vec<Term>) -> Term| lifting_signature(c, 2);
    let def = match name {
        EQUAL => {
            let (q, q2) = (var("Q"), var("Q'"));
            LiftingDef {
                name: EQUAL.into(),
                head: lift(EQUAL),
                signature: two(&|v| app(data(EQUAL), v)),
                clauses: vec![clause(
                    "refl",
                    vec![a.clone(), a.clone(), q.clone(), q2.clone()],
                    ctor("refl"),
                    vec![("A", Term::Set), ("Q", pa.clone()), ("Q'", pa.clone())],
                    pi(
                        "a",
                        a.clone(),
                        app(data(EQUAL), vec![app(q, vec![var("a")]), app(q2, vec![var("a")])]),
                    ),
                )],
            }
        }
        PAIR => LiftingDef {
            name: PAIR.into(),
            head: lift(PAIR),
            signature: two(&|v| prod(v[0].clone(), v[1].clone())),
            clauses: vec![clause(
                ",",
                vec![a.clone(), b.clone(), qa.clone(), qb.clone()],
                app(ctor(","), vec![var("a"), var("b")]),
                vec![
                    ("A", Term::Set),
                    ("B", Term::Set),
                    ("Q_A", pa.clone()),
                    ("Q_B", pb.clone()),
                    ("a", a.clone()),
                    ("b", b.clone()),
                ],
                prod(app(qa.clone(), vec![var("a")]), app(qb.clone(), vec![var("b")])),
            )],
        },
        SUM => {
            let bs = |x: &'static str, t: &Term| {
                vec![
                    ("A", Term::Set),
                    ("B", Term::Set),
                    ("Q_A", pa.clone()),
                    ("Q_B", pb.clone()),
                    (x, t.clone()),
                ]
            };
            let ps = vec![a.clone(), b.clone(), qa.clone(), qb.clone()];
            LiftingDef {
                name: SUM.into(),
                head: lift(SUM),
                signature: two(&|v| sum(v[0].clone(), v[1].clone())),
                clauses: vec![
                    clause(
                        "inl",
                        ps.clone(),
                        app(ctor("inl"), vec![var("a")]),
                        bs("a", &a),
                        app(qa.clone(), vec![var("a")]),
                    ),
                    clause(
                        "inr",
                        ps,
                        app(ctor("inr"), vec![var("b")]),
                        bs("b", &b),
                        app(qb.clone(), vec![var("b")]),
                    ),
                ],
            }
        }
        ARR => LiftingDef {
            name: ARR.into(),
            head: lift(ARR),
            signature: two(&|v| arrow(v[0].clone(), v[1].clone())),
            clauses: vec![clause(
                "",
                vec![a.clone(), b.clone(), qa.clone(), qb.clone()],
                var("f"),
                vec![
                    ("A", Term::Set),
                    ("B", Term::Set),
                    ("Q_A", pa.clone()),
                    ("Q_B", pb.clone()),
                    ("f", arrow(a.clone(), b.clone())),
                ],
                pi(
                    "a",
                    a.clone(),
                    arrow(app(qa, vec![var("a")]), app(qb, vec![app(var("f"), vec![var("a")])])),
                ),
            )],
        },
        UNIT => LiftingDef {
            name: UNIT.into(),
            head: lift(UNIT),
            signature: arrow(data(UNIT), Term::Set),
            clauses: vec![clause("tt", vec![], ctor("tt"), vec![], Term::Top)],
        },
        "KTop" => LiftingDef {
            name: "KTop".into(),
            head: ktop(a.clone()),
            signature: pi("A", Term::Set, arrow(a.clone(), Term::Set)),
            clauses: vec![clause(
                "",
                vec![],
                var("a"),
                vec![("A", Term::Set), ("a", a)],
                Term::Top,
            )],
        },
        _ => {
            return Err(Diagnostic::new(
                DiagCode::UnknownBuiltin,
                format!("no builtin lifting named {name}"),
            ))
        }
    };
    Ok(def)
}

/// `K^`: the lifting of a G-free type expression, given the predicate for
/// each type variable. Primitive base types get the constantly-true predicate.
pub fn lift_type(t: &TypeExpr, preds: &dyn Fn(&str) -> Term) -> Term {
    let ty = Term::from_type;
    match t {
        TypeExpr::Var(v) => preds(v),
        TypeExpr::Unit => ktop(data(UNIT)),
        TypeExpr::Data(n, args) if args.is_empty() => ktop(data(n)),
        TypeExpr::Data(n, args) => {
            let mut xs: Vec<Term> = args.iter().map(ty).collect();
            xs.extend(args.iter().map(|a| lift_type(a, preds)));
            app(lift(n), xs)
        }
        TypeExpr::Prod(a, b) => binary(PAIR, a, b, preds),
        TypeExpr::Sum(a, b) => binary(SUM, a, b, preds),
        TypeExpr::Arrow(a, b) => binary(ARR, a, b, preds),
    }
}

fn binary(h: &str, a: &TypeExpr, b: &TypeExpr, preds: &dyn Fn(&str) -> Term) -> Term {
    app(
        lift(h),
        vec![
            Term::from_type(a),
            Term::from_type(b),
            lift_type(a, preds),
            lift_type(b, preds),
        ],
    )
}

/// How recursive positions of a shape are read.
pub(crate) struct ShapeCtx<'a> {
    pub g: &'a str,
    /// The predicate standing for `G`: `G^` in liftings, `P` in rules.
    pub p: Term,
    /// Monomorphic rule predicate `P : G A -> Set` (plain ADTs).
    pub mono: bool,
    pub preds: &'a dyn Fn(&str) -> Term,
    /// Names in scope, to keep locally bound ones fresh.
    pub taken: BTreeSet<String>,
}

impl ShapeCtx<'_> {
    fn k(&self, t: &TypeExpr) -> Term {
        lift_type(t, self.preds)
    }

    fn rec(&self, args: Vec<Term>, preds: Vec<Term>) -> Term {
        if self.mono {
            self.p.clone()
        } else {
            let mut xs = args;
            xs.extend(preds);
            app(self.p.clone(), xs)
        }
    }

    /// The predicate a shape lifts to, on the carrier `s.to_type(g)`.
    pub fn pred(&self, s: &ShapeF) -> Term {
        let ty = |s: &ShapeF| Term::from_type(&s.to_type(self.g));
        match s {
            ShapeF::Const(t) => self.k(t),
            ShapeF::Rec(args) => self.rec(
                args.iter().map(Term::from_type).collect(),
                args.iter().map(|a| self.k(a)).collect(),
            ),
            ShapeF::TrueNest(ks) => self.rec(ks.iter().map(ty).collect(), ks.iter().map(|k| self.pred(k)).collect()),
            ShapeF::Nested(h, ks) => {
                let mut xs: Vec<Term> = ks.iter().map(ty).collect();
                xs.extend(ks.iter().map(|k| self.pred(k)));
                app(lift(h), xs)
            }
            ShapeF::Product(a, b) => app(lift(PAIR), vec![ty(a), ty(b), self.pred(a), self.pred(b)]),
            ShapeF::Sum(a, b) => app(lift(SUM), vec![ty(a), ty(b), self.pred(a), self.pred(b)]),
            ShapeF::Arrow(d, c) => app(lift(ARR), vec![Term::from_type(d), ty(c), self.k(d), self.pred(c)]),
        }
    }

    /// The proposition that `x` satisfies the lifting of `s`, or `None`
    /// when it is the constantly-true predicate. A top-level function
    /// space is unfolded into a quantified implication.
    pub fn prop(&self, s: &ShapeF, x: Term) -> Option<Term> {
        if let ShapeF::Arrow(d, c) = s {
            let z = fresh_name("z", &self.taken);
            let dz = app(self.k(d), vec![var(&z)]);
            let body = self.prop(c, app(x, vec![var(&z)]))?;
            let body = if self.k(d).is_ktop() { body } else { arrow(dz, body) };
            return Some(pi(&z, Term::from_type(d), body));
        }
        let p = self.pred(s);
        if p.is_ktop() {
            None
        } else {
            Some(app(p, vec![x]))
        }
    }
}

/// Conventional argument names: `e` for equality evidence, `s_B` for
/// `Seq B`, `ts` for `List (LTerm B)`, `bb` for `Bush (Bush A)`.
pub fn arg_base(t: &TypeExpr) -> String {
    fn initial(n: &str) -> char {
        n.chars()
            .rev()
            .find(|c| c.is_uppercase())
            .unwrap_or('x')
            .to_ascii_lowercase()
    }
    fn head_initial(t: &TypeExpr) -> String {
        match t {
            TypeExpr::Var(v) => v.to_lowercase(),
            TypeExpr::Data(n, _) => initial(n).to_string(),
            _ => "x".into(),
        }
    }
    fn var_only(t: &TypeExpr) -> bool {
        match t {
            TypeExpr::Var(_) => true,
            TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) | TypeExpr::Arrow(a, b) => var_only(a) && var_only(b),
            _ => false,
        }
    }
    match t {
        TypeExpr::Var(v) => v.to_lowercase(),
        TypeExpr::Unit => "u".into(),
        TypeExpr::Arrow(..) => "f".into(),
        TypeExpr::Prod(..) => "p".into(),
        TypeExpr::Sum(..) => "v".into(),
        TypeExpr::Data(n, _) if n == EQUAL => "e".into(),
        TypeExpr::Data(n, args) if args.is_empty() => initial(n).to_string(),
        TypeExpr::Data(n, args) if n == crate::ir::LIST && args.len() == 1 => format!("{}s", head_initial(&args[0])),
        TypeExpr::Data(n, args) if args.iter().all(var_only) => {
            fn vars(t: &TypeExpr, out: &mut String) {
                match t {
                    TypeExpr::Var(v) => out.push_str(v),
                    TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) | TypeExpr::Arrow(a, b) => {
                        vars(a, out);
                        vars(b, out);
                    }
                    _ => {}
                }
            }
            let mut vs = String::new();
            args.iter().for_each(|a| vars(a, &mut vs));
            format!("{}_{vs}", initial(n))
        }
        TypeExpr::Data(n, args) => format!("{}{}", initial(n), head_initial(&args[0])),
    }
}

/// Distinct names for a constructor's arguments, avoiding `taken`.
pub fn arg_names(c: &ConstructorDecl, taken: &BTreeSet<String>) -> Vec<String> {
    let mut used = taken.clone();
    let mut out = Vec::new();
    for t in &c.domain {
        let base = arg_base(t);
        let mut n = base.clone();
        let mut k = 1;
        while used.contains(&n) {
            n = format!("{base}{k}");
            k += 1;
        }
        used.insert(n.clone());
        out.push(n);
    }
    out
}

/// Everything the derivations need to know about one constructor of an
/// encoded declaration.
#[derive(Debug, Clone)]
pub struct CtorInfo {
    pub name: String,
    /// Index variables, in return order.
    pub indices: Vec<String>,
    /// Remaining binders, in binder order.
    pub others: Vec<String>,
    pub args: Vec<String>,
    pub domain: Vec<TypeExpr>,
    pub shapes: Vec<ShapeF>,
}

impl CtorInfo {
    pub fn pattern(&self) -> Term {
        let mut xs: Vec<Term> = self.others.iter().map(|b| var(b)).collect();
        xs.extend(self.args.iter().map(|x| var(x)));
        app(ctor(&self.name), xs)
    }

    pub fn preds(&self) -> impl Fn(&str) -> Term {
        |v: &str| var(&q_name(v))
    }

    /// Names bound by the constructor pattern and its predicates.
    pub fn scope(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self
            .indices
            .iter()
            .chain(&self.others)
            .chain(&self.args)
            .cloned()
            .collect();
        s.extend(self.indices.iter().chain(&self.others).map(|v| q_name(v)));
        s
    }
}

pub fn truly_nested_gadt(d: &DataDecl) -> Diagnostic {
    let c = d
        .ctors
        .iter()
        .find(|c| c.domain.iter().any(|t| t.occurrences_under_self(&d.name)))
        .or(d.ctors.first());
    let g = &d.name;
    let msg = format!("{g} is a truly nested GADT; no deep induction rule is derived");
    let mut expl = format!(
        "{g} occurs beneath {g} in a constructor argument, so its lifting would have to be mapped \
         along predicate morphisms, but we cannot define {g}^Map: a lifting of a GADT has no map."
    );
    let structured = c.and_then(|c| c.ret.iter().find(|r| !matches!(r, TypeExpr::Var(_))).map(|r| (c, r)));
    if let Some((c, r)) = structured {
        // name the return index's variables B, C, ... as the constrained form would
        let mut fv = Vec::new();
        r.free_vars(&mut fv);
        let fresh = carrier_names(fv.len() + 1);
        let ren = |v: &str| fresh[1 + fv.iter().position(|x| x == v).unwrap_or(0)].clone();
        let k = r.rename(&ren);
        let q = lift_type(&k, &|v| var(&format!("Q'_{v}")));
        expl.push_str(&format!(
            "\nIn {}, the return index is constrained by Equal A ({k}). Mapping the recursive evidence \
             would need predicates Q'_B with Q' equal to {q}, and predicate morphisms do not guarantee \
             that such a Q'_B exists.",
            c.name,
        ));
    }
    Diagnostic::new(DiagCode::TrulyNestedGadt, msg)
        .at(c.and_then(|c| c.span).or(d.span))
        .explain(expl)
}

impl TypeExpr {
    /// Does `g` occur inside the arguments of an application of `g`?
    pub fn occurrences_under_self(&self, g: &str) -> bool {
        let mut occ = Vec::new();
        self.occurrences(g, &mut occ);
        occ.iter().any(|args| args.iter().any(|a| a.mentions(g)))
    }
}

/// Encode, check the grammar, and name everything for `d`.
pub fn prepare(d: &DataDecl, env: &Env) -> Result<(DataDecl, Vec<CtorInfo>), Diagnostic> {
    if d.classification == Classification::TrulyNestedGadt {
        return Err(truly_nested_gadt(d));
    }
    let hf = henry_ford(d, env)?;
    let shapes = decl_shapes(&hf, env)?;
    let taken = type_names(env);
    let infos = hf
        .ctors
        .iter()
        .zip(shapes)
        .map(|(c, shapes)| {
            let indices = c.index_vars().expect("encoded constructors return variables");
            let others: Vec<String> = c
                .binders
                .iter()
                .map(|b| b.name.clone())
                .filter(|b| !indices.contains(b))
                .collect();
            let mut avoid = taken.clone();
            avoid.extend(indices.iter().chain(&others).cloned());
            avoid.extend(indices.iter().chain(&others).map(|v| q_name(v)));
            CtorInfo {
                name: c.name.clone(),
                args: arg_names(c, &avoid),
                indices,
                others,
                domain: c.domain.clone(),
                shapes,
            }
        })
        .collect();
    Ok((hf, infos))
}

/// The lifting `G^` of a declared type.
pub fn derive_data_lifting(d: &DataDecl, env: &Env) -> Result<LiftingDef, Diagnostic> {
    if d.is_equal() {
        return builtin_lifting(EQUAL);
    }
    let (hf, infos) = prepare(d, env)?;
    let g = hf.name.clone();
    let clauses = infos
        .iter()
        .map(|ci| {
            let preds = ci.preds();
            let ctx = ShapeCtx {
                g: &g,
                p: lift(&g),
                mono: false,
                preds: &preds,
                taken: ci.scope(),
            };
            let conjuncts: Vec<Term> = ci
                .shapes
                .iter()
                .zip(&ci.args)
                .filter_map(|(s, x)| ctx.prop(s, var(x)))
                .collect();
            let body = ci
                .others
                .iter()
                .rev()
                .fold(conj(conjuncts), |acc, b| sig(&q_name(b), pred_ty(var(b)), acc));
            let mut params: Vec<Term> = ci.indices.iter().map(|a| var(a)).collect();
            params.extend(ci.indices.iter().map(|a| var(&q_name(a))));
            let mut binders: Vec<(String, Term)> = ci.indices.iter().map(|a| (a.clone(), Term::Set)).collect();
            binders.extend(ci.indices.iter().map(|a| (q_name(a), pred_ty(var(a)))));
            binders.extend(ci.others.iter().map(|b| (b.clone(), Term::Set)));
            binders.extend(
                ci.args
                    .iter()
                    .zip(&ci.domain)
                    .map(|(x, t)| (x.clone(), Term::from_type(t))),
            );
            LiftClause {
                ctor: ci.name.clone(),
                params,
                pattern: ci.pattern(),
                binders,
                body,
            }
        })
        .collect();
    let gd = g.clone();
    Ok(LiftingDef {
        name: g.clone(),
        head: lift(&g),
        signature: lifting_signature(&move |v| app(data(&gd), v), hf.arity),
        clauses,
    })
}

/// Look up the lifting of any type former in scope.
pub fn lifting_for(name: &str, env: &Env) -> Result<LiftingDef, Diagnostic> {
    match env.get(name) {
        Some(d) => derive_data_lifting(d, env),
        None => builtin_lifting(name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn env() -> Env {
        Env::from_source(corpus::ALL).unwrap()
    }

    fn clause_text(l: &LiftingDef, ctor: &str) -> String {
        let c = l.clauses.iter().find(|c| c.ctor == ctor).unwrap();
        format!("{} = {}", l.lhs(c), c.body)
    }

    #[test]
    fn builtins() {
        let eq = builtin_lifting(EQUAL).unwrap();
        assert_eq!(
            clause_text(&eq, "refl"),
            "Equal^ A A Q Q' refl = forall (a : A) -> Equal (Q a) (Q' a)"
        );
        let p = builtin_lifting(PAIR).unwrap();
        assert_eq!(
            p.signature.to_string(),
            "forall (A B : Set) -> (A -> Set) -> (B -> Set) -> A * B -> Set"
        );
        let s = builtin_lifting(SUM).unwrap();
        assert_eq!(clause_text(&s, "inr"), "Sum^ A B Q_A Q_B (inr b) = Q_B b");
        let a = builtin_lifting(ARR).unwrap();
        assert_eq!(
            clause_text(&a, ""),
            "Arr^ A B Q_A Q_B f = forall (a : A) -> Q_A a -> Q_B (f a)"
        );
        assert_eq!(builtin_lifting("Nope").unwrap_err().code, DiagCode::UnknownBuiltin);
    }

    #[test]
    fn seq_lifting() {
        let env = Env::from_source(corpus::SEQ).unwrap();
        let l = derive_data_lifting(env.get("Seq").unwrap(), &env).unwrap();
        assert_eq!(clause_text(&l, "const"), "Seq^ A Q_A (const a) = Q_A a");
        assert_eq!(
            clause_text(&l, "pair"),
            "Seq^ A Q_A (pair B C e s_B s_C) = exists Q_B . exists Q_C . \
             Equal^ A (B * C) Q_A (Pair^ B C Q_B Q_C) e * Seq^ B Q_B s_B * Seq^ C Q_C s_C"
        );
    }

    #[test]
    fn lterm_liftings() {
        let env = env();
        let ty = derive_data_lifting(env.get("LType").unwrap(), &env).unwrap();
        assert_eq!(
            clause_text(&ty, "bool"),
            "LType^ A Q_A (bool B e) = exists Q_B . Equal^ A Bool Q_A K_T e"
        );
        let tm = derive_data_lifting(env.get("LTerm").unwrap(), &env).unwrap();
        assert_eq!(clause_text(&tm, "var"), "LTerm^ A Q_A (var s t_A) = LType^ A Q_A t_A");
        assert_eq!(
            clause_text(&tm, "app"),
            "LTerm^ A Q_A (app B t_BA t_B) = exists Q_B . \
             LTerm^ (B -> A) (Arr^ B A Q_B Q_A) t_BA * LTerm^ B Q_B t_B"
        );
        assert_eq!(
            clause_text(&tm, "list"),
            "LTerm^ A Q_A (list B e ts) = exists Q_B . \
             Equal^ A (List B) Q_A (List^ B Q_B) e * List^ (LTerm B) (LTerm^ B Q_B) ts"
        );
    }

    #[test]
    fn nested_liftings() {
        let env = env();
        let b = derive_data_lifting(env.get("Bush").unwrap(), &env).unwrap();
        assert_eq!(clause_text(&b, "bnil"), "Bush^ A Q_A bnil = Top");
        assert_eq!(
            clause_text(&b, "bcons"),
            "Bush^ A Q_A (bcons a bb) = Q_A a * Bush^ (Bush A) (Bush^ A Q_A) bb"
        );
        let p = derive_data_lifting(env.get("PTree").unwrap(), &env).unwrap();
        assert_eq!(
            clause_text(&p, "pnode"),
            "PTree^ A Q_A (pnode t_AA) = PTree^ (A * A) (Pair^ A A Q_A Q_A) t_AA"
        );
    }

    #[test]
    fn arrow_arguments_unfold() {
        let env =
            Env::from_source("data T : Set -> Set where\n  lim : forall {A : Set}. (Bool -> T A) -> T A").unwrap();
        let l = derive_data_lifting(env.get("T").unwrap(), &env).unwrap();
        assert_eq!(
            clause_text(&l, "lim"),
            "T^ A Q_A (lim f) = forall (z : Bool) -> T^ A Q_A (f z)"
        );
    }

    #[test]
    fn truly_nested_gadt_diagnostic() {
        let env = Env::from_source(corpus::NESTED_GADT).unwrap();
        let e = derive_data_lifting(env.get("G").unwrap(), &env).unwrap_err();
        assert_eq!(e.code, DiagCode::TrulyNestedGadt);
        assert!(e.explanation.contains("G^Map"), "{}", e.explanation);
        assert!(e.explanation.contains("Q'_B"));
        assert!(e.explanation.contains("Pair^ B B Q'_B Q'_B"), "{}", e.explanation);
        assert!(e.span.is_some());
    }
}
