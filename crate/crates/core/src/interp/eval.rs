//! Evaluation of derived liftings: the clause bodies are read as boolean
//! formulas, existential predicates are found by exhaustive table search.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::{Interp, SemType, Value};
use crate::diag::{DiagCode, Diagnostic};
use crate::ir::EQUAL;
use crate::lift::{lifting_for, LiftClause, LiftingDef};
use crate::term::Term;

/// A predicate on a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    Top,
    Table(Rc<BTreeMap<Value, bool>>),
    /// `H^ types preds`
    Lift {
        name: String,
        types: Vec<SemType>,
        preds: Vec<Pred>,
    },
}

#[derive(Clone, Default)]
struct Scope {
    tys: BTreeMap<String, SemType>,
    preds: BTreeMap<String, Pred>,
    vals: BTreeMap<String, Value>,
}

fn stuck(what: impl std::fmt::Display) -> Diagnostic {
    Diagnostic::new(DiagCode::GrammarViolation, format!("cannot evaluate {what}"))
}

impl Interp<'_> {
    fn lifting(&self, name: &str) -> Result<Rc<LiftingDef>, Diagnostic> {
        if let Some(l) = self.liftings.borrow().get(name) {
            return Ok(l.clone());
        }
        let l = Rc::new(lifting_for(name, self.env)?);
        self.liftings.borrow_mut().insert(name.to_string(), l.clone());
        Ok(l)
    }

    pub fn apply_pred(&self, p: &Pred, v: &Value) -> Result<bool, Diagnostic> {
        match p {
            Pred::Top => Ok(true),
            Pred::Table(t) => t
                .get(v)
                .copied()
                .ok_or_else(|| super::cap(format!("{v} lies outside the enumerated carrier"))),
            Pred::Lift { name, types, preds } => self.eval_lifting(&*self.lifting(name)?, types, preds, v),
        }
    }

    /// `l types preds v`, read pointwise.
    pub fn eval_lifting(
        &self,
        l: &LiftingDef,
        types: &[SemType],
        preds: &[Pred],
        v: &Value,
    ) -> Result<bool, Diagnostic> {
        for c in &l.clauses {
            if let Some(sc) = self.match_clause(c, types, preds, v) {
                return self.prop(&c.body, &sc);
            }
        }
        Err(stuck(format_args!("{}^ at {v}: no clause matches", l.name)))
    }

    fn match_clause(&self, c: &LiftClause, types: &[SemType], preds: &[Pred], v: &Value) -> Option<Scope> {
        let mut sc = Scope::default();
        let n = types.len();
        if c.params.len() != n + preds.len() {
            return None;
        }
        for (i, p) in c.params.iter().enumerate() {
            let Term::Var(x) = p else { return None };
            if i < n {
                match sc.tys.get(x) {
                    Some(t) if *t != types[i] => return None,
                    Some(_) => {}
                    None => {
                        sc.tys.insert(x.clone(), types[i].clone());
                    }
                }
            } else {
                sc.preds.insert(x.clone(), preds[i - n].clone());
            }
        }
        let is_type = |x: &str| c.binders.iter().any(|(b, t)| b == x && *t == Term::Set);
        let (head, args) = c.pattern.spine();
        match (head, v) {
            (Term::Var(x), _) if args.is_empty() => {
                sc.vals.insert(x.clone(), v.clone());
            }
            (Term::Ctor(k), Value::Pair(a, b)) if k == "," && args.len() == 2 => {
                bind(&mut sc, &args[0], a)?;
                bind(&mut sc, &args[1], b)?;
            }
            (Term::Ctor(k), Value::Inl(a)) if k == "inl" => bind(&mut sc, &args[0], a)?,
            (Term::Ctor(k), Value::Inr(a)) if k == "inr" => bind(&mut sc, &args[0], a)?,
            (Term::Ctor(k), Value::Unit) if k == "tt" => {}
            (Term::Ctor(k), Value::Con { ctor, tys, args: vs }) if k == ctor => {
                let mut vals = vs.iter();
                for a in args {
                    let Term::Var(x) = a else { return None };
                    if is_type(x) {
                        let t = tys.iter().find(|(b, _)| b == x)?.1.clone();
                        sc.tys.insert(x.clone(), t);
                    } else {
                        sc.vals.insert(x.clone(), vals.next()?.clone());
                    }
                }
            }
            _ => return None,
        }
        Some(sc)
    }

    fn ty(&self, t: &Term, sc: &Scope) -> Result<SemType, Diagnostic> {
        Ok(match t {
            Term::Var(x) => sc.tys.get(x).cloned().ok_or_else(|| stuck(x))?,
            Term::Prod(a, b) => SemType::prod(self.ty(a, sc)?, self.ty(b, sc)?),
            Term::Sum(a, b) => SemType::Sum(Box::new(self.ty(a, sc)?), Box::new(self.ty(b, sc)?)),
            Term::Arrow(a, b) => SemType::arrow(self.ty(a, sc)?, self.ty(b, sc)?),
            Term::Data(h) => self
                .sem(&crate::ir::TypeExpr::Data(h.clone(), vec![]), &Default::default())
                .ok_or_else(|| stuck(h))?,
            Term::App(h, args) => match &**h {
                Term::Data(h) => SemType::Data(
                    h.clone(),
                    args.iter().map(|a| self.ty(a, sc)).collect::<Result<_, _>>()?,
                ),
                _ => return Err(stuck(t)),
            },
            _ => return Err(stuck(t)),
        })
    }

    fn pred(&self, t: &Term, sc: &Scope) -> Result<Pred, Diagnostic> {
        Ok(match t {
            Term::Var(x) => sc.preds.get(x).cloned().ok_or_else(|| stuck(x))?,
            Term::KTop(_) => Pred::Top,
            Term::App(h, args) => match &**h {
                Term::Lift(name) => {
                    let n = args.len() / 2;
                    Pred::Lift {
                        name: name.clone(),
                        types: args[..n].iter().map(|a| self.ty(a, sc)).collect::<Result<_, _>>()?,
                        preds: args[n..].iter().map(|a| self.pred(a, sc)).collect::<Result<_, _>>()?,
                    }
                }
                _ => return Err(stuck(t)),
            },
            _ => return Err(stuck(t)),
        })
    }

    fn val(&self, t: &Term, sc: &Scope) -> Result<Value, Diagnostic> {
        match t {
            Term::Var(x) => sc.vals.get(x).cloned().ok_or_else(|| stuck(x)),
            Term::App(f, args) => {
                let mut v = self.val(f, sc)?;
                for a in args {
                    let x = self.val(a, sc)?;
                    v = v.apply(&x).cloned().ok_or_else(|| stuck(t))?;
                }
                Ok(v)
            }
            _ => Err(stuck(t)),
        }
    }

    fn prop(&self, t: &Term, sc: &Scope) -> Result<bool, Diagnostic> {
        match t {
            Term::Top => Ok(true),
            Term::Prod(a, b) => Ok(self.prop(a, sc)? && self.prop(b, sc)?),
            Term::Sum(a, b) => Ok(self.prop(a, sc)? || self.prop(b, sc)?),
            Term::Arrow(a, b) => Ok(!self.prop(a, sc)? || self.prop(b, sc)?),
            Term::Pi(z, dom, body) => {
                let d = self.ty(dom, sc)?;
                let graphs = self.graphs_applied_to(z, body, sc);
                for v in self.enumerate(&d, self.model.depth)?.iter() {
                    // functions built under a constructor have truncated domains
                    if graphs.iter().any(|g| g.apply(v).is_none()) {
                        continue;
                    }
                    let mut inner = sc.clone();
                    inner.vals.insert(z.clone(), v.clone());
                    if !self.prop(body, &inner)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Term::Sig(q, dom, body) => {
                let Term::Arrow(carrier, _) = &**dom else {
                    return Err(stuck(t));
                };
                let c = self.ty(carrier, sc)?;
                for p in self.tables(&c)? {
                    let mut inner = sc.clone();
                    inner.preds.insert(q.clone(), p);
                    if self.prop(body, &inner)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Term::App(h, args) => match &**h {
                // propositional equality of two propositions, read as booleans
                Term::Data(e) if e == EQUAL && args.len() == 2 => {
                    Ok(self.prop(&args[0], sc)? == self.prop(&args[1], sc)?)
                }
                _ => {
                    let (last, init) = args.split_last().ok_or_else(|| stuck(t))?;
                    let head = if init.is_empty() {
                        (**h).clone()
                    } else {
                        Term::App(h.clone(), init.to_vec())
                    };
                    let p = self.pred(&head, sc)?;
                    let v = self.val(last, sc)?;
                    self.apply_pred(&p, &v)
                }
            },
            _ => Err(stuck(t)),
        }
    }
}

impl Interp<'_> {
    /// The function values `body` applies to the variable `z`.
    fn graphs_applied_to(&self, z: &str, body: &Term, sc: &Scope) -> Vec<Value> {
        let out = std::cell::RefCell::new(Vec::new());
        body.any(&|t| {
            let Term::App(h, args) = t else { return false };
            for (i, a) in args.iter().enumerate() {
                if matches!(a, Term::Var(x) if x == z) {
                    let f = if i == 0 {
                        (**h).clone()
                    } else {
                        Term::App(h.clone(), args[..i].to_vec())
                    };
                    if let Ok(g @ Value::Fun(_)) = self.val(&f, sc) {
                        out.borrow_mut().push(g);
                    }
                }
            }
            false
        });
        out.into_inner()
    }
}

fn bind(sc: &mut Scope, pat: &Term, v: &Value) -> Option<()> {
    let Term::Var(x) = pat else { return None };
    sc.vals.insert(x.clone(), v.clone());
    Some(())
}
