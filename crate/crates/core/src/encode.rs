//! Equality-constrained (Henry Ford) form of a declaration.
//!
//! A constructor returning a structured instance `G (K B)` is rewritten to
//! return `G A` for a fresh `A` and to take `Equal A (K B)` as its first
//! argument. Constructors that already return distinct variables are kept.

use std::collections::{BTreeSet, HashMap};

use crate::diag::{DiagCode, Diagnostic};
use crate::ir::{Binder, Classification, ConstructorDecl, DataDecl, Env, TypeExpr, EQUAL};
use crate::syntax::BUILTINS;

/// Names a binder may not take: every type constructor in scope.
pub(crate) fn type_names(env: &Env) -> BTreeSet<String> {
    let mut taken: BTreeSet<String> = BUILTINS.iter().map(|(n, _)| n.to_string()).collect();
    taken.insert("Unit".into());
    taken.extend(env.all().iter().map(|d| d.name.clone()));
    taken
}

pub fn henry_ford(d: &DataDecl, env: &Env) -> Result<DataDecl, Diagnostic> {
    if d.classification == Classification::TrulyNestedGadt {
        return Err(Diagnostic::new(
            DiagCode::TrulyNested,
            format!("{} is a truly nested GADT and has no constrained form here", d.name),
        )
        .at(d.span));
    }
    if d.is_equal() || !d.classification.is_gadt() {
        return Ok(d.clone());
    }
    let taken = type_names(env);
    let mut out = d.clone();
    out.ctors = d.ctors.iter().map(|c| encode_ctor(c, &taken)).collect();
    Ok(out)
}

/// Index positions whose return expression is not a variable unique to it.
fn structured_indices(c: &ConstructorDecl) -> Vec<usize> {
    (0..c.ret.len())
        .filter(|&i| match &c.ret[i] {
            TypeExpr::Var(v) => c.ret.iter().enumerate().any(|(j, r)| j != i && r.mentions_var(v)),
            _ => true,
        })
        .collect()
}

fn encode_ctor(c: &ConstructorDecl, taken: &BTreeSet<String>) -> ConstructorDecl {
    let structured = structured_indices(c);
    if structured.is_empty() {
        return c.clone();
    }
    let arity = c.ret.len();
    let mut idx_names = Vec::new();
    let mut avoid = taken.clone();
    for i in 0..arity {
        let base = if i == 0 { "A".to_string() } else { format!("A{i}") };
        let mut n = base.clone();
        let mut k = arity;
        while avoid.contains(&n) {
            n = format!("A{k}");
            k += 1;
        }
        avoid.insert(n.clone());
        idx_names.push(n);
    }
    // kept variable indices take the new index name; everything else gets B, C, ...
    let mut ren: HashMap<String, String> = HashMap::new();
    for (i, r) in c.ret.iter().enumerate() {
        if !structured.contains(&i) {
            if let TypeExpr::Var(v) = r {
                ren.insert(v.clone(), idx_names[i].clone());
            }
        }
    }
    let mut letters = ('B'..='Z')
        .map(|ch| ch.to_string())
        .chain((1..).map(|k| format!("B{k}")));
    let mut others = Vec::new();
    for b in &c.binders {
        if ren.contains_key(&b.name) {
            continue;
        }
        let n = letters.by_ref().find(|n| !avoid.contains(n)).expect("unbounded supply");
        ren.insert(b.name.clone(), n.clone());
        others.push(Binder {
            name: n,
            implicit: false,
        });
    }
    let rn = |t: &TypeExpr| t.rename(&|v| ren.get(v).cloned().unwrap_or_else(|| v.to_string()));
    let mut binders: Vec<Binder> = idx_names
        .iter()
        .map(|n| Binder {
            name: n.clone(),
            implicit: true,
        })
        .collect();
    binders.extend(others);
    let mut domain: Vec<TypeExpr> = structured
        .iter()
        .map(|&i| TypeExpr::data(EQUAL, vec![TypeExpr::var(&idx_names[i]), rn(&c.ret[i])]))
        .collect();
    domain.extend(c.domain.iter().map(rn));
    ConstructorDecl {
        name: c.name.clone(),
        binders,
        domain,
        ret: idx_names.iter().map(|n| TypeExpr::var(n)).collect(),
        span: c.span,
    }
}

/// Encode every module declaration, replacing them in a copy of the environment.
pub fn henry_ford_env(env: &Env) -> Result<Env, Vec<Diagnostic>> {
    let mut out = env.clone();
    let mut diags = Vec::new();
    for d in env.module_decls() {
        match henry_ford(d, env) {
            Ok(e) => out.insert(e),
            Err(e) => diags.push(e),
        }
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

impl TypeExpr {
    pub fn mentions_var(&self, v: &str) -> bool {
        let mut fv = Vec::new();
        self.free_vars(&mut fv);
        fv.iter().any(|x| x == v)
    }
}

impl DataDecl {
    /// Equality up to renaming of each constructor's binders.
    pub fn alpha_eq(&self, other: &DataDecl) -> bool {
        let a = self.to_raw();
        let b = other.to_raw();
        a.name == b.name
            && a.arity == b.arity
            && a.ctors.len() == b.ctors.len()
            && a.ctors.iter().zip(&b.ctors).all(|(x, y)| x.alpha_eq(y))
    }
}
