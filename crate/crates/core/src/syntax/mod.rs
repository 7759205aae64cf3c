//! Surface language for data declarations (`.gdt` files).
//!
//! ```text
//! data Seq : Set -> Set where
//!   const : forall {A : Set}. A -> Seq A
//!   pair  : forall {A B : Set}. Seq A -> Seq B -> Seq (A * B)
//! ```
//!
//! `*` and `+` are right-associative with `*` binding tighter than `+`,
//! `->` is right-associative and loosest, application binds tightest.

mod lexer;
mod parser;
mod printer;

pub use parser::parse_module;
pub use printer::print_module;

use crate::diag::Span;

/// Builtin type constructors and their arities. `List` and `Equal` may be
/// redeclared by a module, in which case the module's declaration wins.
pub const BUILTINS: &[(&str, usize)] = &[("Equal", 2), ("Bool", 0), ("String", 0), ("List", 1)];

pub fn builtin_arity(name: &str) -> Option<usize> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|&(_, a)| a)
}

#[derive(Debug, Clone, Default)]
pub struct SourceModule {
    pub decls: Vec<RawDecl>,
}

#[derive(Debug, Clone)]
pub struct RawDecl {
    pub name: String,
    pub arity: usize,
    pub ctors: Vec<RawCtor>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct RawCtor {
    pub name: String,
    pub binders: Vec<RawBinder>,
    /// Full constructor type, including the final `G args`.
    pub ty: RawTypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct RawBinder {
    pub name: String,
    pub implicit: bool,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum RawTypeExpr {
    Var(String, Span),
    App(String, Vec<RawTypeExpr>, Span),
    Prod(Box<RawTypeExpr>, Box<RawTypeExpr>),
    Sum(Box<RawTypeExpr>, Box<RawTypeExpr>),
    Arrow(Box<RawTypeExpr>, Box<RawTypeExpr>),
    Unit(Span),
}

impl RawTypeExpr {
    pub fn span(&self) -> Span {
        match self {
            RawTypeExpr::Var(_, s) | RawTypeExpr::App(_, _, s) | RawTypeExpr::Unit(s) => *s,
            RawTypeExpr::Prod(a, b) | RawTypeExpr::Sum(a, b) | RawTypeExpr::Arrow(a, b) => a.span().join(b.span()),
        }
    }

    /// Split `D1 -> D2 -> ... -> R` into domains and result.
    pub fn split_arrows(&self) -> (Vec<&RawTypeExpr>, &RawTypeExpr) {
        let mut doms = Vec::new();
        let mut cur = self;
        while let RawTypeExpr::Arrow(d, r) = cur {
            doms.push(&**d);
            cur = r;
        }
        (doms, cur)
    }

    fn same_up_to(
        &self,
        other: &RawTypeExpr,
        ren: &dyn Fn(&str) -> Option<usize>,
        ren2: &dyn Fn(&str) -> Option<usize>,
    ) -> bool {
        use RawTypeExpr::*;
        match (self, other) {
            (Var(a, _), Var(b, _)) => ren(a).is_some() && ren(a) == ren2(b),
            (App(f, xs, _), App(g, ys, _)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.same_up_to(y, ren, ren2))
            }
            (Prod(a, b), Prod(c, d)) | (Sum(a, b), Sum(c, d)) | (Arrow(a, b), Arrow(c, d)) => {
                a.same_up_to(c, ren, ren2) && b.same_up_to(d, ren, ren2)
            }
            (Unit(_), Unit(_)) => true,
            _ => false,
        }
    }
}

impl RawCtor {
    /// Alpha-equivalence: binders compare positionally, spans are ignored.
    pub fn alpha_eq(&self, other: &RawCtor) -> bool {
        if self.name != other.name
            || self.binders.len() != other.binders.len()
            || self
                .binders
                .iter()
                .zip(&other.binders)
                .any(|(a, b)| a.implicit != b.implicit)
        {
            return false;
        }
        let pos = |bs: &[RawBinder], n: &str| bs.iter().position(|b| b.name == n);
        let l = |n: &str| pos(&self.binders, n);
        let r = |n: &str| pos(&other.binders, n);
        self.ty.same_up_to(&other.ty, &l, &r)
    }
}

impl SourceModule {
    pub fn alpha_eq(&self, other: &SourceModule) -> bool {
        self.decls.len() == other.decls.len()
            && self.decls.iter().zip(&other.decls).all(|(a, b)| {
                a.name == b.name
                    && a.arity == b.arity
                    && a.ctors.len() == b.ctors.len()
                    && a.ctors.iter().zip(&b.ctors).all(|(x, y)| x.alpha_eq(y))
            })
    }

    pub fn decl(&self, name: &str) -> Option<&RawDecl> {
        self.decls.iter().find(|d| d.name == name)
    }
}
