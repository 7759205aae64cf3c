//! Direct reading of "every primitive datum satisfies its predicate",
//! computed from the declarations alone.
//!
//! A constructor value satisfies predicates `P_i` at its indices when some
//! choice of predicate for each constructor binder makes every `P_i`
//! pointwise equal to the leaf predicate of the `i`-th return index, and
//! every argument's leaves satisfy the chosen predicates.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::{Bindings, Interp, Pred, SemType, Value};
use crate::diag::{DiagCode, Diagnostic};
use crate::ir::{DataDecl, TypeExpr};

type Rho = BTreeMap<String, (SemType, Leaf)>;

#[derive(Clone)]
enum Leaf {
    Top,
    Table(Rc<BTreeMap<Value, bool>>),
    /// The leaves of a value of this type satisfy `rho`.
    Of(TypeExpr, Rc<Rho>),
}

fn bad(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagCode::GrammarViolation, msg)
}

impl Interp<'_> {
    /// True iff every leaf of `v : d types` satisfies the predicate of its carrier.
    pub fn leaf_oracle(&self, d: &DataDecl, types: &[SemType], preds: &[Pred], v: &Value) -> Result<bool, Diagnostic> {
        let ps = preds
            .iter()
            .map(|p| match p {
                Pred::Top => Ok(Leaf::Top),
                Pred::Table(t) => Ok(Leaf::Table(t.clone())),
                Pred::Lift { .. } => Err(bad("the leaf oracle takes tables, not liftings")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.data_ok(&d.name, types, &ps, v)
    }

    fn leaf(&self, p: &Leaf, v: &Value) -> Result<bool, Diagnostic> {
        match p {
            Leaf::Top => Ok(true),
            Leaf::Table(t) => t
                .get(v)
                .copied()
                .ok_or_else(|| super::cap(format!("{v} lies outside the enumerated carrier"))),
            Leaf::Of(t, rho) => self.leaves(v, t, rho),
        }
    }

    fn leaves(&self, v: &Value, t: &TypeExpr, rho: &Rho) -> Result<bool, Diagnostic> {
        match (t, v) {
            (TypeExpr::Var(a), _) => {
                let (_, p) = rho.get(a).ok_or_else(|| bad(format!("unbound {a}")))?;
                self.leaf(p, v)
            }
            (TypeExpr::Unit, _) => Ok(true),
            (TypeExpr::Data(h, args), _) if args.is_empty() && self.env.get(h).is_none() => Ok(true),
            (TypeExpr::Prod(a, b), Value::Pair(x, y)) => Ok(self.leaves(x, a, rho)? && self.leaves(y, b, rho)?),
            (TypeExpr::Sum(a, _), Value::Inl(x)) => self.leaves(x, a, rho),
            (TypeExpr::Sum(_, b), Value::Inr(y)) => self.leaves(y, b, rho),
            (TypeExpr::Arrow(a, b), Value::Fun(graph)) => {
                for (x, y) in graph {
                    if self.leaves(x, a, rho)? && !self.leaves(y, b, rho)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (TypeExpr::Data(h, args), _) => {
                let b: Bindings = rho.iter().map(|(k, (s, _))| (k.clone(), s.clone())).collect();
                let ts = args
                    .iter()
                    .map(|a| self.sem(a, &b).ok_or_else(|| bad(format!("open type {a}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let rho = Rc::new(rho.clone());
                let ps: Vec<Leaf> = args.iter().map(|a| Leaf::Of(a.clone(), rho.clone())).collect();
                self.data_ok(h, &ts, &ps, v)
            }
            _ => Err(bad(format!("{v} is not a value of {t}"))),
        }
    }

    fn data_ok(&self, h: &str, ts: &[SemType], ps: &[Leaf], v: &Value) -> Result<bool, Diagnostic> {
        let Value::Con { ctor, tys, args } = v else {
            return Err(bad(format!("{v} is not a {h} value")));
        };
        let d = self.env.get(h).ok_or_else(|| bad(format!("unknown type {h}")))?;
        let c = d
            .ctor(ctor)
            .ok_or_else(|| bad(format!("{ctor} is not a constructor of {h}")))?;
        let sem: BTreeMap<&str, &SemType> = tys.iter().map(|(n, s)| (n.as_str(), s)).collect();
        // a variable return index fixes its binder's predicate
        let mut rho = Rho::new();
        let mut checks = Vec::new();
        for (i, k) in c.ret.iter().enumerate() {
            match k {
                TypeExpr::Var(a) if !rho.contains_key(a) => {
                    rho.insert(a.clone(), (ts[i].clone(), ps[i].clone()));
                }
                _ => checks.push(i),
            }
        }
        let free: Vec<&str> = c
            .binders
            .iter()
            .map(|b| b.name.as_str())
            .filter(|n| !rho.contains_key(*n))
            .collect();
        let mut choices: Vec<Rho> = vec![rho];
        for b in free {
            let s = (*sem.get(b).ok_or_else(|| bad(format!("{b} uninstantiated")))?).clone();
            let tables = self.tables(&s)?;
            choices = choices
                .into_iter()
                .flat_map(|r| {
                    let s = s.clone();
                    tables.iter().map(move |p| {
                        let Pred::Table(t) = p else { unreachable!() };
                        let mut r = r.clone();
                        r.insert(b.to_string(), (s.clone(), Leaf::Table(t.clone())));
                        r
                    })
                })
                .collect();
        }
        'choice: for rho in choices {
            let shared = Rc::new(rho.clone());
            for &i in &checks {
                let carrier = self.enumerate(&ts[i], self.model.depth)?;
                let q = Leaf::Of(c.ret[i].clone(), shared.clone());
                for y in carrier.iter() {
                    if self.leaf(&ps[i], y)? != self.leaf(&q, y)? {
                        continue 'choice;
                    }
                }
            }
            for (x, t) in args.iter().zip(&c.domain) {
                if !self.leaves(x, t, &rho)? {
                    continue 'choice;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}
