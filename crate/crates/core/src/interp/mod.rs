//! Finite-set semantics: declarations denote finite sets of values up to a
//! depth bound, predicates are boolean tables, and liftings evaluate to
//! booleans. Proof relevance is deliberately collapsed; this is a
//! differential oracle, not a model of the type theory.

mod eval;
mod oracle;
mod sweep;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::diag::{DiagCode, Diagnostic};
use crate::ir::{ConstructorDecl, Env, TypeExpr, EQUAL};

pub use eval::Pred;
pub use sweep::{index_types, SweepReport};

/// A closed type over finite carriers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemType {
    /// A carrier of `n` anonymous atoms, or a primitive base type.
    Base(String, usize),
    Unit,
    Prod(Box<SemType>, Box<SemType>),
    Sum(Box<SemType>, Box<SemType>),
    Arrow(Box<SemType>, Box<SemType>),
    Data(String, Vec<SemType>),
}

impl SemType {
    pub fn base(name: &str, n: usize) -> Self {
        SemType::Base(name.to_string(), n)
    }

    pub fn prod(a: SemType, b: SemType) -> Self {
        SemType::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: SemType, b: SemType) -> Self {
        SemType::Arrow(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Base(n, k) => write!(f, "{n}#{k}"),
            SemType::Unit => write!(f, "Unit"),
            SemType::Prod(a, b) => write!(f, "({a} * {b})"),
            SemType::Sum(a, b) => write!(f, "({a} + {b})"),
            SemType::Arrow(a, b) => write!(f, "({a} -> {b})"),
            SemType::Data(h, args) => {
                write!(f, "{h}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(String, usize),
    Unit,
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
    /// A function as its graph, in domain enumeration order.
    Fun(Vec<(Value, Value)>),
    /// A constructor with the instantiation of each of its type binders.
    Con {
        ctor: String,
        tys: Vec<(String, SemType)>,
        args: Vec<Value>,
    },
}

impl Value {
    pub fn apply(&self, x: &Value) -> Option<&Value> {
        match self {
            Value::Fun(g) => g.iter().find(|(a, _)| a == x).map(|(_, b)| b),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(c, i) => write!(f, "{}{i}", c.to_lowercase()),
            Value::Unit => write!(f, "tt"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "(inl {a})"),
            Value::Inr(a) => write!(f, "(inr {a})"),
            Value::Fun(g) => {
                write!(f, "{{")?;
                for (i, (a, b)) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a} |-> {b}")?;
                }
                write!(f, "}}")
            }
            Value::Con { ctor, args, .. } if args.is_empty() => write!(f, "{ctor}"),
            Value::Con { ctor, args, .. } => {
                write!(f, "({ctor}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Sizes and bounds of the finite model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinModel {
    /// Atoms per type-variable carrier.
    pub atoms: usize,
    pub string_atoms: usize,
    /// Constructor nesting bound for inductive types.
    pub depth: usize,
    /// Largest function space enumerated.
    pub fn_cap: usize,
    /// Largest carrier over which all predicate tables are searched.
    pub table_bits: usize,
    /// Types an otherwise unconstrained constructor binder ranges over.
    pub universe: Vec<SemType>,
}

impl Default for FinModel {
    fn default() -> Self {
        FinModel {
            atoms: 3,
            string_atoms: 2,
            depth: 3,
            fn_cap: 256,
            table_bits: 8,
            universe: vec![SemType::base("Bool", 2)],
        }
    }
}

pub(crate) fn cap(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagCode::CapExceeded, msg)
}

pub type Bindings = BTreeMap<String, SemType>;

type ValueCache = HashMap<(SemType, usize), Rc<Vec<Value>>>;

/// Enumeration and evaluation over one environment and model. Caches are
/// per instance; results do not depend on evaluation order.
pub struct Interp<'a> {
    pub env: &'a Env,
    pub model: FinModel,
    values: RefCell<ValueCache>,
    liftings: RefCell<HashMap<String, Rc<crate::lift::LiftingDef>>>,
}

impl<'a> Interp<'a> {
    pub fn new(env: &'a Env, model: FinModel) -> Self {
        Interp {
            env,
            model,
            values: RefCell::new(HashMap::new()),
            liftings: RefCell::new(HashMap::new()),
        }
    }

    /// The denotation of a type under an assignment of its variables.
    pub fn sem(&self, t: &TypeExpr, b: &Bindings) -> Option<SemType> {
        Some(match t {
            TypeExpr::Var(v) => b.get(v)?.clone(),
            TypeExpr::Unit => SemType::Unit,
            TypeExpr::Prod(x, y) => SemType::prod(self.sem(x, b)?, self.sem(y, b)?),
            TypeExpr::Sum(x, y) => SemType::Sum(Box::new(self.sem(x, b)?), Box::new(self.sem(y, b)?)),
            TypeExpr::Arrow(x, y) => SemType::arrow(self.sem(x, b)?, self.sem(y, b)?),
            TypeExpr::Data(h, args) if args.is_empty() && self.env.get(h).is_none() => self.base(h),
            TypeExpr::Data(h, args) => {
                SemType::Data(h.clone(), args.iter().map(|a| self.sem(a, b)).collect::<Option<_>>()?)
            }
        })
    }

    fn base(&self, name: &str) -> SemType {
        let n = match name {
            "Bool" => 2,
            "String" => self.model.string_atoms,
            _ => self.model.atoms,
        };
        SemType::base(name, n)
    }

    /// Extend `b` so that `t` denotes `s`.
    pub fn unify(&self, t: &TypeExpr, s: &SemType, b: &mut Bindings) -> bool {
        match (t, s) {
            (TypeExpr::Var(v), _) => match b.get(v) {
                Some(x) => x == s,
                None => {
                    b.insert(v.clone(), s.clone());
                    true
                }
            },
            (TypeExpr::Unit, SemType::Unit) => true,
            (TypeExpr::Prod(x, y), SemType::Prod(p, q))
            | (TypeExpr::Sum(x, y), SemType::Sum(p, q))
            | (TypeExpr::Arrow(x, y), SemType::Arrow(p, q)) => self.unify(x, p, b) && self.unify(y, q, b),
            (TypeExpr::Data(h, args), _) if args.is_empty() && self.env.get(h).is_none() => self.base(h) == *s,
            (TypeExpr::Data(h, args), SemType::Data(k, xs)) => {
                h == k && args.len() == xs.len() && args.iter().zip(xs).all(|(a, x)| self.unify(a, x, b))
            }
            _ => false,
        }
    }

    /// Every instantiation of a constructor's binders that makes its return
    /// type denote `Data(h, args)` and its equality arguments inhabited.
    pub fn instances(&self, c: &ConstructorDecl, args: &[SemType]) -> Vec<Bindings> {
        let mut b = Bindings::new();
        if !c.ret.iter().zip(args).all(|(k, a)| self.unify(k, a, &mut b)) {
            return vec![];
        }
        let eqs: Vec<(&TypeExpr, &TypeExpr)> = c
            .domain
            .iter()
            .filter_map(|t| match t {
                TypeExpr::Data(h, xs) if h == EQUAL && xs.len() == 2 => Some((&xs[0], &xs[1])),
                _ => None,
            })
            .collect();
        if !self.solve(&eqs, &mut b) {
            return vec![];
        }
        let free: Vec<&str> = c
            .binders
            .iter()
            .map(|x| x.name.as_str())
            .filter(|n| !b.contains_key(*n))
            .collect();
        let mut out = vec![b];
        for v in free {
            out = out
                .into_iter()
                .flat_map(|b| {
                    self.model.universe.iter().map(move |u| {
                        let mut b = b.clone();
                        b.insert(v.to_string(), u.clone());
                        b
                    })
                })
                .collect();
        }
        out.retain(|b| {
            let mut b = b.clone();
            self.solve(&eqs, &mut b)
        });
        out
    }

    fn solve(&self, eqs: &[(&TypeExpr, &TypeExpr)], b: &mut Bindings) -> bool {
        loop {
            let mut progress = false;
            for (x, y) in eqs {
                match (self.sem(x, b), self.sem(y, b)) {
                    (Some(sx), Some(sy)) => {
                        if sx != sy {
                            return false;
                        }
                    }
                    (Some(sx), None) => {
                        if !self.unify(y, &sx, b) {
                            return false;
                        }
                        progress = true;
                    }
                    (None, Some(sy)) => {
                        if !self.unify(x, &sy, b) {
                            return false;
                        }
                        progress = true;
                    }
                    (None, None) => {}
                }
            }
            if !progress {
                return true;
            }
        }
    }

    /// All values of `t` built from at most `depth` nested constructors.
    pub fn enumerate(&self, t: &SemType, depth: usize) -> Result<Rc<Vec<Value>>, Diagnostic> {
        let key = (t.clone(), depth);
        if let Some(v) = self.values.borrow().get(&key) {
            return Ok(v.clone());
        }
        let vs = Rc::new(self.enumerate_uncached(t, depth)?);
        self.values.borrow_mut().insert(key, vs.clone());
        Ok(vs)
    }

    fn enumerate_uncached(&self, t: &SemType, depth: usize) -> Result<Vec<Value>, Diagnostic> {
        Ok(match t {
            SemType::Base(c, n) => (0..*n).map(|i| Value::Atom(c.clone(), i)).collect(),
            SemType::Unit => vec![Value::Unit],
            SemType::Prod(a, b) => {
                let (xs, ys) = (self.enumerate(a, depth)?, self.enumerate(b, depth)?);
                xs.iter()
                    .flat_map(|x| {
                        ys.iter()
                            .map(move |y| Value::Pair(Box::new(x.clone()), Box::new(y.clone())))
                    })
                    .collect()
            }
            SemType::Sum(a, b) => {
                let mut out: Vec<Value> = self
                    .enumerate(a, depth)?
                    .iter()
                    .map(|x| Value::Inl(Box::new(x.clone())))
                    .collect();
                out.extend(
                    self.enumerate(b, depth)?
                        .iter()
                        .map(|x| Value::Inr(Box::new(x.clone()))),
                );
                out
            }
            SemType::Arrow(a, b) => {
                let (xs, ys) = (self.enumerate(a, depth)?, self.enumerate(b, depth)?);
                let size = (ys.len() as f64).powi(xs.len() as i32);
                if size > self.model.fn_cap as f64 {
                    return Err(cap(format!(
                        "the function space {t} has {} elements, above the cap of {}",
                        ys.len()
                            .checked_pow(xs.len() as u32)
                            .map_or("too many".to_string(), |n| n.to_string()),
                        self.model.fn_cap
                    )));
                }
                let mut graphs: Vec<Vec<(Value, Value)>> = vec![vec![]];
                for x in xs.iter() {
                    graphs = graphs
                        .into_iter()
                        .flat_map(|g| {
                            ys.iter().map(move |y| {
                                let mut g = g.clone();
                                g.push((x.clone(), y.clone()));
                                g
                            })
                        })
                        .collect();
                }
                graphs.into_iter().map(Value::Fun).collect()
            }
            SemType::Data(h, args) => {
                let d = self
                    .env
                    .get(h)
                    .ok_or_else(|| Diagnostic::new(DiagCode::UnresolvedName, format!("unknown type {h}")))?;
                // equality proofs carry no data and do not count towards depth
                if h != EQUAL && depth == 0 {
                    return Ok(vec![]);
                }
                let inner = if h == EQUAL { depth } else { depth - 1 };
                let mut out = Vec::new();
                for c in &d.ctors {
                    for b in self.instances(c, args) {
                        let mut rows: Vec<Vec<Value>> = vec![vec![]];
                        for dom in &c.domain {
                            let s = self.sem(dom, &b).expect("constructor binders are instantiated");
                            let vs = self.enumerate(&s, inner)?;
                            rows = rows
                                .into_iter()
                                .flat_map(|r| {
                                    vs.iter().map(move |v| {
                                        let mut r = r.clone();
                                        r.push(v.clone());
                                        r
                                    })
                                })
                                .collect();
                            if rows.is_empty() {
                                break;
                            }
                        }
                        let tys: Vec<(String, SemType)> =
                            c.binders.iter().map(|x| (x.name.clone(), b[&x.name].clone())).collect();
                        out.extend(rows.into_iter().map(|args| Value::Con {
                            ctor: c.name.clone(),
                            tys: tys.clone(),
                            args,
                        }));
                    }
                }
                out
            }
        })
    }

    /// All boolean tables over the values of `t`.
    pub fn tables(&self, t: &SemType) -> Result<Vec<Pred>, Diagnostic> {
        let vs = self.enumerate(t, self.model.depth)?;
        if vs.len() > self.model.table_bits {
            return Err(cap(format!(
                "{t} has {} values; searching all predicates on it exceeds the cap of 2^{}",
                vs.len(),
                self.model.table_bits
            )));
        }
        Ok((0u64..1 << vs.len())
            .map(|bits| {
                Pred::Table(Rc::new(
                    vs.iter()
                        .enumerate()
                        .map(|(i, v)| (v.clone(), bits >> i & 1 == 1))
                        .collect(),
                ))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn atoms(n: usize) -> SemType {
        SemType::base("A", n)
    }

    #[test]
    fn equality_inhabitants() {
        let env = Env::prelude();
        let it = Interp::new(&env, FinModel::default());
        let eq = |a, b| SemType::Data(EQUAL.into(), vec![a, b]);
        assert!(it
            .enumerate(&eq(atoms(1), SemType::base("B", 1)), 3)
            .unwrap()
            .is_empty());
        let refl = it.enumerate(&eq(atoms(2), atoms(2)), 3).unwrap();
        assert_eq!(refl.len(), 1);
        assert_eq!(refl[0].to_string(), "refl");
    }

    #[test]
    fn seq_needs_a_product_index_for_pairs() {
        for src in [corpus::SEQ, corpus::SEQ_HF] {
            let env = Env::from_source(src).unwrap();
            let it = Interp::new(&env, FinModel::default());
            let seq = |a| SemType::Data("Seq".into(), vec![a]);
            let vs = it.enumerate(&seq(atoms(2)), 2).unwrap();
            let shown: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            assert_eq!(shown, ["(const a0)", "(const a1)"]);
            // (A * A): two consts of pairs, plus pair of two consts at each side
            let vs = it.enumerate(&seq(SemType::prod(atoms(2), atoms(2))), 2).unwrap();
            assert_eq!(vs.len(), 4 + 2 * 2);
        }
    }

    #[test]
    fn function_space_cap() {
        let env = Env::prelude();
        let it = Interp::new(&env, FinModel::default());
        let big = SemType::arrow(atoms(3), SemType::arrow(atoms(3), atoms(3)));
        assert_eq!(it.enumerate(&big, 1).unwrap_err().code, DiagCode::CapExceeded);
        assert_eq!(it.enumerate(&SemType::arrow(atoms(2), atoms(3)), 1).unwrap().len(), 9);
    }
}
