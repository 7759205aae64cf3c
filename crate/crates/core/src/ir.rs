//! Resolved declarations, grammar classification, and constructor shapes.

use std::collections::HashSet;
use std::fmt;

use crate::diag::{DiagCode, Diagnostic, Diagnostics, Span};
use crate::syntax::{self, RawBinder, RawCtor, RawDecl, RawTypeExpr, SourceModule};

pub const EQUAL: &str = "Equal";
pub const LIST: &str = "List";

/// A type expression inside a constructor signature. Variables name the
/// constructor's own binders; binder names are unique per constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    Var(String),
    Data(String, Vec<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Unit,
}

impl TypeExpr {
    pub fn var(n: &str) -> Self {
        TypeExpr::Var(n.to_string())
    }

    pub fn data(n: &str, args: Vec<TypeExpr>) -> Self {
        TypeExpr::Data(n.to_string(), args)
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Arrow(Box::new(a), Box::new(b))
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            TypeExpr::Var(_) | TypeExpr::Unit => false,
            TypeExpr::Data(n, args) => n == name || args.iter().any(|a| a.mentions(name)),
            TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) | TypeExpr::Arrow(a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            TypeExpr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            TypeExpr::Unit => {}
            TypeExpr::Data(_, args) => args.iter().for_each(|a| a.free_vars(out)),
            TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) | TypeExpr::Arrow(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> TypeExpr {
        match self {
            TypeExpr::Var(v) => TypeExpr::Var(f(v)),
            TypeExpr::Unit => TypeExpr::Unit,
            TypeExpr::Data(n, args) => TypeExpr::Data(n.clone(), args.iter().map(|a| a.rename(f)).collect()),
            TypeExpr::Prod(a, b) => TypeExpr::prod(a.rename(f), b.rename(f)),
            TypeExpr::Sum(a, b) => TypeExpr::sum(a.rename(f), b.rename(f)),
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(a.rename(f), b.rename(f)),
        }
    }

    /// Every occurrence `G args` of the named type constructor.
    pub fn occurrences<'a>(&'a self, g: &str, out: &mut Vec<&'a [TypeExpr]>) {
        match self {
            TypeExpr::Var(_) | TypeExpr::Unit => {}
            TypeExpr::Data(n, args) => {
                if n == g {
                    out.push(args);
                }
                args.iter().for_each(|a| a.occurrences(g, out));
            }
            TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) | TypeExpr::Arrow(a, b) => {
                a.occurrences(g, out);
                b.occurrences(g, out);
            }
        }
    }

    fn from_raw(t: &RawTypeExpr) -> TypeExpr {
        match t {
            RawTypeExpr::Var(n, _) => TypeExpr::Var(n.clone()),
            RawTypeExpr::App(n, args, _) => TypeExpr::Data(n.clone(), args.iter().map(TypeExpr::from_raw).collect()),
            RawTypeExpr::Prod(a, b) => TypeExpr::prod(TypeExpr::from_raw(a), TypeExpr::from_raw(b)),
            RawTypeExpr::Sum(a, b) => TypeExpr::sum(TypeExpr::from_raw(a), TypeExpr::from_raw(b)),
            RawTypeExpr::Arrow(a, b) => TypeExpr::arrow(TypeExpr::from_raw(a), TypeExpr::from_raw(b)),
            RawTypeExpr::Unit(_) => TypeExpr::Unit,
        }
    }

    fn to_raw(&self) -> RawTypeExpr {
        let sp = Span::default();
        match self {
            TypeExpr::Var(n) => RawTypeExpr::Var(n.clone(), sp),
            TypeExpr::Data(n, args) => RawTypeExpr::App(n.clone(), args.iter().map(TypeExpr::to_raw).collect(), sp),
            TypeExpr::Prod(a, b) => RawTypeExpr::Prod(Box::new(a.to_raw()), Box::new(b.to_raw())),
            TypeExpr::Sum(a, b) => RawTypeExpr::Sum(Box::new(a.to_raw()), Box::new(b.to_raw())),
            TypeExpr::Arrow(a, b) => RawTypeExpr::Arrow(Box::new(a.to_raw()), Box::new(b.to_raw())),
            TypeExpr::Unit => RawTypeExpr::Unit(sp),
        }
    }

    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, open) = match self {
            TypeExpr::Var(_) | TypeExpr::Unit => (4, false),
            TypeExpr::Data(_, a) if a.is_empty() => (4, false),
            TypeExpr::Data(..) => (3, true),
            TypeExpr::Prod(..) => (2, true),
            TypeExpr::Sum(..) => (1, true),
            TypeExpr::Arrow(..) => (0, true),
        };
        let paren = open && p < prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            TypeExpr::Var(v) => f.write_str(v)?,
            TypeExpr::Unit => f.write_str("Unit")?,
            TypeExpr::Data(n, args) => {
                f.write_str(n)?;
                for a in args {
                    f.write_str(" ")?;
                    a.fmt_prec(4, f)?;
                }
            }
            TypeExpr::Prod(a, b) => {
                a.fmt_prec(3, f)?;
                f.write_str(" * ")?;
                b.fmt_prec(2, f)?;
            }
            TypeExpr::Sum(a, b) => {
                a.fmt_prec(2, f)?;
                f.write_str(" + ")?;
                b.fmt_prec(1, f)?;
            }
            TypeExpr::Arrow(a, b) => {
                a.fmt_prec(1, f)?;
                f.write_str(" -> ")?;
                b.fmt_prec(0, f)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub implicit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: String,
    pub binders: Vec<Binder>,
    pub domain: Vec<TypeExpr>,
    /// Return indices, one per parameter of the declared type.
    pub ret: Vec<TypeExpr>,
    pub span: Option<Span>,
}

/// An equality argument `Equal A K` tying return index `A` to `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub position: usize,
    pub index_var: String,
    pub rhs: TypeExpr,
}

impl ConstructorDecl {
    /// The return indices when they are pairwise-distinct variables.
    pub fn index_vars(&self) -> Option<Vec<String>> {
        let mut out = Vec::new();
        for r in &self.ret {
            match r {
                TypeExpr::Var(v) if !out.contains(v) => out.push(v.clone()),
                _ => return None,
            }
        }
        Some(out)
    }

    /// True when every return index is a distinct variable.
    pub fn is_variable_return(&self) -> bool {
        self.index_vars().is_some()
    }

    /// Binders that are not return indices, in binder order.
    pub fn existential_binders(&self) -> Vec<&Binder> {
        let idx = self.index_vars().unwrap_or_default();
        self.binders.iter().filter(|b| !idx.contains(&b.name)).collect()
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let Some(idx) = self.index_vars() else {
            return Vec::new();
        };
        self.domain
            .iter()
            .enumerate()
            .filter_map(|(i, t)| match t {
                TypeExpr::Data(n, args) if n == EQUAL => match &args[0] {
                    TypeExpr::Var(v) if idx.contains(v) => Some(Constraint {
                        position: i,
                        index_var: v.clone(),
                        rhs: args[1].clone(),
                    }),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    }

    fn to_raw(&self, g: &str) -> RawCtor {
        let sp = Span::default();
        let mut ty = TypeExpr::Data(g.to_string(), self.ret.clone()).to_raw();
        for d in self.domain.iter().rev() {
            ty = RawTypeExpr::Arrow(Box::new(d.to_raw()), Box::new(ty));
        }
        RawCtor {
            name: self.name.clone(),
            binders: self
                .binders
                .iter()
                .map(|b| RawBinder {
                    name: b.name.clone(),
                    implicit: b.implicit,
                    span: sp,
                })
                .collect(),
            ty,
            span: sp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Adt,
    NestedType,
    TrulyNestedType,
    Gadt,
    TrulyNestedGadt,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Adt => "ADT",
            Classification::NestedType => "NestedType",
            Classification::TrulyNestedType => "TrulyNestedType",
            Classification::Gadt => "GADT",
            Classification::TrulyNestedGadt => "TrulyNestedGADT",
        }
    }

    pub fn is_gadt(&self) -> bool {
        matches!(self, Classification::Gadt | Classification::TrulyNestedGadt)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub arity: usize,
    pub ctors: Vec<ConstructorDecl>,
    pub classification: Classification,
    pub span: Option<Span>,
}

impl DataDecl {
    pub fn ctor(&self, name: &str) -> Option<&ConstructorDecl> {
        self.ctors.iter().find(|c| c.name == name)
    }

    /// The builtin equality type, treated as the primitive GADT.
    pub fn is_equal(&self) -> bool {
        self.name == EQUAL
    }

    pub fn to_raw(&self) -> RawDecl {
        RawDecl {
            name: self.name.clone(),
            arity: self.arity,
            ctors: self.ctors.iter().map(|c| c.to_raw(&self.name)).collect(),
            span: Span::default(),
        }
    }

    /// Surface text of this declaration alone.
    pub fn to_source(&self) -> String {
        syntax::print_module(&SourceModule {
            decls: vec![self.to_raw()],
        })
    }
}

const PRELUDE: &str = "
data Equal : Set -> Set -> Set where
  refl : forall {A : Set}. Equal A A
data List : Set -> Set where
  nil : forall {A : Set}. List A
  cons : forall {A : Set}. A -> List A -> List A
";

/// Ordered collection of resolved declarations, including the prelude.
#[derive(Debug, Clone)]
pub struct Env {
    decls: Vec<DataDecl>,
    /// Number of leading entries that come from the prelude.
    prelude_len: usize,
}

impl Env {
    pub fn prelude() -> Env {
        let m = syntax::parse_module(PRELUDE).expect("prelude parses");
        let mut env = Env {
            decls: Vec::new(),
            prelude_len: 0,
        };
        for d in &m.decls {
            env.push_raw(d);
        }
        env.prelude_len = env.decls.len();
        env
    }

    pub fn from_module(m: &SourceModule) -> Env {
        let mut env = Env::prelude();
        for d in &m.decls {
            env.push_raw(d);
        }
        env
    }

    /// Parse, resolve, and classify in one step.
    pub fn from_source(text: &str) -> Result<Env, Diagnostics> {
        let m = syntax::parse_module(text)?;
        Ok(Env::from_module(&m))
    }

    fn push_raw(&mut self, d: &RawDecl) {
        let ctors = d
            .ctors
            .iter()
            .map(|c| {
                let (doms, ret) = c.ty.split_arrows();
                let ret = match TypeExpr::from_raw(ret) {
                    TypeExpr::Data(_, args) => args,
                    _ => unreachable!("return types are checked by the parser"),
                };
                ConstructorDecl {
                    name: c.name.clone(),
                    binders: c
                        .binders
                        .iter()
                        .map(|b| Binder {
                            name: b.name.clone(),
                            implicit: b.implicit,
                        })
                        .collect(),
                    domain: doms.into_iter().map(TypeExpr::from_raw).collect(),
                    ret,
                    span: Some(c.span),
                }
            })
            .collect();
        let mut decl = DataDecl {
            name: d.name.clone(),
            arity: d.arity,
            ctors,
            classification: Classification::Adt,
            span: Some(d.span),
        };
        decl.classification = classify_decl(&decl, self);
        self.insert(decl);
    }

    /// Add or replace (shadowing a prelude entry) a declaration.
    pub fn insert(&mut self, decl: DataDecl) {
        if let Some(pos) = self.decls.iter().position(|d| d.name == decl.name) {
            self.decls.remove(pos);
            if pos < self.prelude_len {
                self.prelude_len -= 1;
            }
        }
        self.decls.push(decl);
    }

    pub fn remove(&mut self, name: &str) -> Option<DataDecl> {
        let pos = self.decls.iter().position(|d| d.name == name)?;
        if pos < self.prelude_len {
            self.prelude_len -= 1;
        }
        Some(self.decls.remove(pos))
    }

    pub fn get(&self, name: &str) -> Option<&DataDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn all(&self) -> &[DataDecl] {
        &self.decls
    }

    /// Declarations that came from the module, in dependency (source) order.
    pub fn module_decls(&self) -> &[DataDecl] {
        &self.decls[self.prelude_len..]
    }

    pub fn is_prelude(&self, name: &str) -> bool {
        self.decls[..self.prelude_len].iter().any(|d| d.name == name)
    }

    pub fn classification(&self, name: &str) -> Option<Classification> {
        if name == EQUAL {
            return Some(Classification::Gadt);
        }
        self.get(name).map(|d| d.classification)
    }
}

/// Classify a declaration from its constructors alone.
pub fn classify_decl(d: &DataDecl, _env: &Env) -> Classification {
    let g = d.name.as_str();
    let structured = d
        .ctors
        .iter()
        .any(|c| !c.is_variable_return() || !c.constraints().is_empty());
    let mut truly_nested = false;
    let mut at_own_instance = true;
    for c in &d.ctors {
        let mut occ = Vec::new();
        for t in &c.domain {
            t.occurrences(g, &mut occ);
        }
        for args in occ {
            if args.iter().any(|a| a.mentions(g)) {
                truly_nested = true;
            }
            if args != c.ret.as_slice() {
                at_own_instance = false;
            }
        }
        if !c.is_variable_return() {
            at_own_instance = false;
        }
    }
    match (structured, truly_nested) {
        (true, true) => Classification::TrulyNestedGadt,
        (true, false) => Classification::Gadt,
        (false, true) => Classification::TrulyNestedType,
        (false, false) if at_own_instance => Classification::Adt,
        (false, false) => Classification::NestedType,
    }
}

/// Grammar parse of one constructor domain argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeF {
    Product(Box<ShapeF>, Box<ShapeF>),
    Sum(Box<ShapeF>, Box<ShapeF>),
    /// `F1 -> F2 G B`, `F1` free of G.
    Arrow(TypeExpr, Box<ShapeF>),
    /// `G (F1 B)` with G-free arguments.
    Rec(Vec<TypeExpr>),
    /// G-free type.
    Const(TypeExpr),
    /// `H (F_k G B)` for a functorial H other than G.
    Nested(String, Vec<ShapeF>),
    /// `G (F_k G B)`: G beneath itself. Only produced for truly nested types.
    TrueNest(Vec<ShapeF>),
}

impl ShapeF {
    pub fn to_type(&self, g: &str) -> TypeExpr {
        match self {
            ShapeF::Product(a, b) => TypeExpr::prod(a.to_type(g), b.to_type(g)),
            ShapeF::Sum(a, b) => TypeExpr::sum(a.to_type(g), b.to_type(g)),
            ShapeF::Arrow(d, c) => TypeExpr::arrow(d.clone(), c.to_type(g)),
            ShapeF::Rec(args) => TypeExpr::data(g, args.clone()),
            ShapeF::Const(t) => t.clone(),
            ShapeF::Nested(h, ks) => TypeExpr::data(h, ks.iter().map(|k| k.to_type(g)).collect()),
            ShapeF::TrueNest(ks) => TypeExpr::data(g, ks.iter().map(|k| k.to_type(g)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ShapeF::Product(a, b) | ShapeF::Sum(a, b) => 1 + a.depth().max(b.depth()),
            ShapeF::Arrow(_, c) => 1 + c.depth(),
            ShapeF::Rec(_) | ShapeF::Const(_) => 1,
            ShapeF::Nested(_, ks) | ShapeF::TrueNest(ks) => 1 + ks.iter().map(ShapeF::depth).max().unwrap_or(0),
        }
    }
}

/// Parse a domain argument of `g` against the constructor grammar.
///
/// G-free subterms classify as `Const` before any structural production is
/// tried; `G` applications become `Rec`, other heads `Nested`.
/// `G` beneath `G` is accepted (as `TrueNest`) only when `allow_true_nesting`.
pub fn shape_of(arg: &TypeExpr, g: &str, env: &Env, allow_true_nesting: bool) -> Result<ShapeF, Diagnostic> {
    if !arg.mentions(g) {
        return Ok(ShapeF::Const(arg.clone()));
    }
    match arg {
        TypeExpr::Data(n, args) if n == g => {
            if args.iter().any(|a| a.mentions(g)) {
                if allow_true_nesting {
                    let ks = args
                        .iter()
                        .map(|a| shape_of(a, g, env, true))
                        .collect::<Result<_, _>>()?;
                    Ok(ShapeF::TrueNest(ks))
                } else {
                    Err(Diagnostic::new(
                        DiagCode::NestedG,
                        format!("{g} occurs inside the arguments of {g} in `{arg}`"),
                    ))
                }
            } else {
                Ok(ShapeF::Rec(args.clone()))
            }
        }
        TypeExpr::Data(h, args) => {
            if env.classification(h).is_some_and(|c| c.is_gadt()) {
                return Err(Diagnostic::new(
                    DiagCode::HIsGadt,
                    format!("{g} occurs under {h}, which is a GADT and has no lifting map"),
                ));
            }
            let ks = args
                .iter()
                .map(|a| shape_of(a, g, env, allow_true_nesting))
                .collect::<Result<_, _>>()?;
            Ok(ShapeF::Nested(h.clone(), ks))
        }
        TypeExpr::Prod(a, b) => Ok(ShapeF::Product(
            Box::new(shape_of(a, g, env, allow_true_nesting)?),
            Box::new(shape_of(b, g, env, allow_true_nesting)?),
        )),
        TypeExpr::Sum(a, b) => Ok(ShapeF::Sum(
            Box::new(shape_of(a, g, env, allow_true_nesting)?),
            Box::new(shape_of(b, g, env, allow_true_nesting)?),
        )),
        TypeExpr::Arrow(d, c) => {
            if d.mentions(g) {
                return Err(Diagnostic::new(
                    DiagCode::GrammarViolation,
                    format!("{g} occurs in the domain of the function type `{arg}`"),
                ));
            }
            Ok(ShapeF::Arrow(
                (**d).clone(),
                Box::new(shape_of(c, g, env, allow_true_nesting)?),
            ))
        }
        TypeExpr::Var(_) | TypeExpr::Unit => unreachable!("G-free atoms are handled above"),
    }
}

/// Shapes of every domain argument of every constructor, or the first
/// grammar diagnostic (with the constructor's span).
pub fn decl_shapes(d: &DataDecl, env: &Env) -> Result<Vec<Vec<ShapeF>>, Diagnostic> {
    let allow = d.classification == Classification::TrulyNestedType;
    d.ctors
        .iter()
        .map(|c| {
            c.domain
                .iter()
                .map(|t| shape_of(t, &d.name, env, allow).map_err(|e| e.at(c.span)))
                .collect()
        })
        .collect()
}

/// Validate a declaration: arity, grammar, and no hidden occurrences.
pub fn check_decl(d: &DataDecl, env: &Env) -> Diagnostics {
    let mut diags = Vec::new();
    if d.arity == 0 {
        diags.push(Diagnostic::new(DiagCode::ZeroArity, format!("{} has no type parameters", d.name)).at(d.span));
    }
    let allow = d.classification == Classification::TrulyNestedType;
    for c in &d.ctors {
        for r in &c.ret {
            if r.mentions(&d.name) {
                diags.push(
                    Diagnostic::new(
                        DiagCode::NestedG,
                        format!("return index of {} mentions {}", c.name, d.name),
                    )
                    .at(c.span),
                );
            }
        }
        for t in &c.domain {
            if let Err(e) = shape_of(t, &d.name, env, allow) {
                diags.push(e.at(c.span));
            }
        }
    }
    let mut seen = HashSet::new();
    for c in &d.ctors {
        if !seen.insert(&c.name) {
            diags.push(
                Diagnostic::new(
                    DiagCode::DuplicateDeclaration,
                    format!("constructor {} declared twice in {}", c.name, d.name),
                )
                .at(c.span),
            );
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn env() -> Env {
        Env::from_source(corpus::ALL).unwrap()
    }

    #[test]
    fn corpus_classifications() {
        let e = env();
        let c = |n: &str| e.get(n).unwrap().classification;
        assert_eq!(c("Equal"), Classification::Gadt);
        assert_eq!(c("List"), Classification::Adt);
        assert_eq!(c("Rose"), Classification::Adt);
        assert_eq!(c("PTree"), Classification::NestedType);
        assert_eq!(c("Bush"), Classification::TrulyNestedType);
        assert_eq!(c("Seq"), Classification::Gadt);
        assert_eq!(c("LType"), Classification::Gadt);
        assert_eq!(c("LTerm"), Classification::Gadt);
        let g = Env::from_source(corpus::NESTED_GADT).unwrap();
        assert_eq!(g.get("G").unwrap().classification, Classification::TrulyNestedGadt);
    }

    #[test]
    fn shape_examples() {
        let e = env();
        let seq = e.get("Seq").unwrap();
        let pair = seq.ctor("pair").unwrap();
        let rec = pair.domain.iter().find(|t| t.mentions("Seq")).unwrap();
        assert_eq!(
            shape_of(rec, "Seq", &e, false).unwrap(),
            ShapeF::Rec(vec![TypeExpr::var("B")])
        );
        assert_eq!(
            shape_of(&TypeExpr::var("A"), "Seq", &e, false).unwrap(),
            ShapeF::Const(TypeExpr::var("A"))
        );
        let lterm = e.get("LTerm").unwrap();
        let list = lterm.ctor("list").unwrap();
        assert_eq!(
            shape_of(&list.domain[1], "LTerm", &e, false).unwrap(),
            ShapeF::Nested("List".into(), vec![ShapeF::Rec(vec![TypeExpr::var("B")])])
        );
    }

    #[test]
    fn nested_g_is_rejected() {
        let e = Env::from_source(corpus::NESTED_GADT).unwrap();
        let c = &e.get("G").unwrap().ctors[0];
        let err = shape_of(&c.domain[0], "G", &e, false).unwrap_err();
        assert_eq!(err.code, DiagCode::NestedG);
    }

    #[test]
    fn grammar_violation_and_gadt_head() {
        let e = Env::from_source(
            "data Seq : Set -> Set where
  const : forall {A : Set}. A -> Seq A
  pair : forall {A B : Set}. Seq A -> Seq B -> Seq (A * B)
data X : Set -> Set where
  c : forall {A : Set}. (X A -> A) -> X A
data Y : Set -> Set where
  d : forall {A : Set}. Seq (Y A) -> Y A",
        )
        .unwrap();
        let x = e.get("X").unwrap();
        assert_eq!(check_decl(x, &e)[0].code, DiagCode::GrammarViolation);
        let y = e.get("Y").unwrap();
        assert_eq!(check_decl(y, &e)[0].code, DiagCode::HIsGadt);
    }

    #[test]
    fn shapes_reprint_to_their_type() {
        let e = env();
        for d in e.module_decls() {
            let shapes = decl_shapes(d, &e).unwrap();
            for (c, ss) in d.ctors.iter().zip(&shapes) {
                for (t, s) in c.domain.iter().zip(ss) {
                    assert_eq!(&s.to_type(&d.name), t);
                }
            }
        }
    }

    #[test]
    fn bush_shape_is_true_nesting() {
        let e = env();
        let bush = e.get("Bush").unwrap();
        let s = decl_shapes(bush, &e).unwrap();
        assert_eq!(s[1][1], ShapeF::TrueNest(vec![ShapeF::Rec(vec![TypeExpr::var("A")])]));
    }
}
