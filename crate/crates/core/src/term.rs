//! Dependent type terms: the language of liftings, hypotheses and rules.
//!
//! Binders are named. Comparison up to renaming goes through
//! [`Term::canonical`], which renames bound variables by binding depth and
//! turns a `Pi` whose binder is unused into a plain `Arrow`.

use std::collections::BTreeSet;
use std::fmt;

use crate::ir::TypeExpr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Set,
    /// The unit proposition.
    Top,
    /// A type constructor: a declaration or a builtin (`Equal`, `Bool`, ...).
    Data(String),
    Ctor(String),
    /// The predicate lifting `H^` of type constructor `H`.
    Lift(String),
    PredMap,
    /// A named induction hypothesis `dIndC`.
    Hyp(String),
    /// The constantly-true predicate on the given carrier.
    KTop(Box<Term>),
    Pi(String, Box<Term>, Box<Term>),
    Arrow(Box<Term>, Box<Term>),
    Lam(String, Box<Term>, Box<Term>),
    /// Dependent pair, written `exists x . body`.
    Sig(String, Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    App(Box<Term>, Vec<Term>),
}

pub fn var(n: &str) -> Term {
    Term::Var(n.to_string())
}

pub fn data(n: &str) -> Term {
    Term::Data(n.to_string())
}

pub fn lift(n: &str) -> Term {
    Term::Lift(n.to_string())
}

pub fn ctor(n: &str) -> Term {
    Term::Ctor(n.to_string())
}

pub fn ktop(carrier: Term) -> Term {
    Term::KTop(Box::new(carrier))
}

/// Application, flattening nested spines. No arguments returns the head.
pub fn app(head: Term, args: Vec<Term>) -> Term {
    if args.is_empty() {
        return head;
    }
    match head {
        Term::App(h, mut xs) => {
            xs.extend(args);
            Term::App(h, xs)
        }
        h => Term::App(Box::new(h), args),
    }
}

pub fn pi(n: &str, dom: Term, body: Term) -> Term {
    Term::Pi(n.to_string(), Box::new(dom), Box::new(body))
}

pub fn lam(n: &str, dom: Term, body: Term) -> Term {
    Term::Lam(n.to_string(), Box::new(dom), Box::new(body))
}

pub fn sig(n: &str, dom: Term, body: Term) -> Term {
    Term::Sig(n.to_string(), Box::new(dom), Box::new(body))
}

pub fn arrow(a: Term, b: Term) -> Term {
    Term::Arrow(Box::new(a), Box::new(b))
}

pub fn prod(a: Term, b: Term) -> Term {
    Term::Prod(Box::new(a), Box::new(b))
}

pub fn sum(a: Term, b: Term) -> Term {
    Term::Sum(Box::new(a), Box::new(b))
}

/// `forall (x1 : T1) ... (xn : Tn) -> body`
pub fn pis(binders: &[(String, Term)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, t)| pi(n, t.clone(), acc))
}

pub fn lams(binders: &[(String, Term)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, t)| lam(n, t.clone(), acc))
}

/// `p1 -> ... -> pn -> body`
pub fn arrows(premises: Vec<Term>, body: Term) -> Term {
    premises.into_iter().rev().fold(body, |acc, p| arrow(p, acc))
}

/// Right-nested conjunction; the empty conjunction is `Top`.
pub fn conj(mut parts: Vec<Term>) -> Term {
    match parts.pop() {
        None => Term::Top,
        Some(last) => parts.into_iter().rev().fold(last, |acc, p| prod(p, acc)),
    }
}

/// `X -> Set`, the type of a predicate on `X`.
pub fn pred_ty(carrier: Term) -> Term {
    arrow(carrier, Term::Set)
}

impl Term {
    pub fn from_type(t: &TypeExpr) -> Term {
        match t {
            TypeExpr::Var(v) => var(v),
            TypeExpr::Unit => data("Unit"),
            TypeExpr::Data(n, args) => app(data(n), args.iter().map(Term::from_type).collect()),
            TypeExpr::Prod(a, b) => prod(Term::from_type(a), Term::from_type(b)),
            TypeExpr::Sum(a, b) => sum(Term::from_type(a), Term::from_type(b)),
            TypeExpr::Arrow(a, b) => arrow(Term::from_type(a), Term::from_type(b)),
        }
    }

    /// Head and arguments of an application spine (no arguments otherwise).
    pub fn spine(&self) -> (&Term, &[Term]) {
        match self {
            Term::App(h, args) => (h, args),
            t => (t, &[]),
        }
    }

    pub fn is_ktop(&self) -> bool {
        matches!(self, Term::KTop(_))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Set | Term::Top | Term::Data(_) | Term::Ctor(_) | Term::Lift(_) | Term::PredMap | Term::Hyp(_) => {}
            Term::KTop(c) => c.collect_free(bound, out),
            Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
                d.collect_free(bound, out);
                bound.push(n.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::Arrow(a, b) | Term::Prod(a, b) | Term::Sum(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::App(h, args) => {
                h.collect_free(bound, out);
                args.iter().for_each(|a| a.collect_free(bound, out));
            }
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        self.free_vars().contains(name)
    }

    /// Capture-avoiding substitution of `repl` for free `name`.
    pub fn subst(&self, name: &str, repl: &Term) -> Term {
        let fv = repl.free_vars();
        self.subst_with(name, repl, &fv)
    }

    fn subst_with(&self, name: &str, repl: &Term, fv: &BTreeSet<String>) -> Term {
        let go = |t: &Term| t.subst_with(name, repl, fv);
        match self {
            Term::Var(v) if v == name => repl.clone(),
            Term::Var(_)
            | Term::Set
            | Term::Top
            | Term::Data(_)
            | Term::Ctor(_)
            | Term::Lift(_)
            | Term::PredMap
            | Term::Hyp(_) => self.clone(),
            Term::KTop(c) => ktop(go(c)),
            Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
                let d2 = go(d);
                let (n2, b2) = if n == name {
                    (n.clone(), (**b).clone())
                } else if fv.contains(n) && b.mentions_var(name) {
                    let mut avoid = fv.clone();
                    avoid.extend(b.free_vars());
                    let fresh = fresh_name(n, &avoid);
                    let renamed = b.subst(n, &var(&fresh));
                    (fresh, renamed.subst_with(name, repl, fv))
                } else {
                    (n.clone(), go(b))
                };
                rebuild_binder(self, n2, d2, b2)
            }
            Term::Arrow(a, b) => arrow(go(a), go(b)),
            Term::Prod(a, b) => prod(go(a), go(b)),
            Term::Sum(a, b) => sum(go(a), go(b)),
            Term::App(h, args) => app(go(h), args.iter().map(go).collect()),
        }
    }

    /// Full beta normalization.
    pub fn beta(&self) -> Term {
        match self {
            Term::App(h, args) => {
                let mut head = h.beta();
                let mut rest: Vec<Term> = args.iter().map(Term::beta).collect();
                while let Term::Lam(n, _, body) = &head {
                    if rest.is_empty() {
                        break;
                    }
                    let a = rest.remove(0);
                    head = body.subst(n, &a).beta();
                }
                app(head, rest)
            }
            Term::KTop(c) => ktop(c.beta()),
            Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
                rebuild_binder(self, n.clone(), d.beta(), b.beta())
            }
            Term::Arrow(a, b) => arrow(a.beta(), b.beta()),
            Term::Prod(a, b) => prod(a.beta(), b.beta()),
            Term::Sum(a, b) => sum(a.beta(), b.beta()),
            _ => self.clone(),
        }
    }

    /// Bound variables renamed `#0, #1, ...` by binding depth; unused `Pi`
    /// binders become arrows. Two terms are alpha-equal iff their canonical
    /// forms are identical.
    pub fn canonical(&self) -> Term {
        self.canon(&mut Vec::new())
    }

    fn canon(&self, scope: &mut Vec<(String, String)>) -> Term {
        match self {
            Term::Var(v) => match scope.iter().rev().find(|(n, _)| n == v) {
                Some((_, c)) => var(c),
                None => self.clone(),
            },
            Term::Set | Term::Top | Term::Data(_) | Term::Ctor(_) | Term::Lift(_) | Term::PredMap | Term::Hyp(_) => {
                self.clone()
            }
            Term::KTop(c) => ktop(c.canon(scope)),
            Term::Pi(n, d, b) if !b.mentions_var(n) => arrow(d.canon(scope), b.canon(scope)),
            Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
                let d2 = d.canon(scope);
                let c = format!("#{}", scope.len());
                scope.push((n.clone(), c.clone()));
                let b2 = b.canon(scope);
                scope.pop();
                rebuild_binder(self, c, d2, b2)
            }
            Term::Arrow(a, b) => arrow(a.canon(scope), b.canon(scope)),
            Term::Prod(a, b) => prod(a.canon(scope), b.canon(scope)),
            Term::Sum(a, b) => sum(a.canon(scope), b.canon(scope)),
            Term::App(h, args) => app(h.canon(scope), args.iter().map(|a| a.canon(scope)).collect()),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.canonical() == other.canonical()
    }

    /// Peel a `Pi`/`Arrow` spine into binders (`None` name for arrows) and
    /// the final codomain.
    pub fn telescope(&self) -> (Vec<(Option<String>, Term)>, Term) {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::Pi(n, d, b) => {
                    out.push((Some(n.clone()), (**d).clone()));
                    cur = b;
                }
                Term::Arrow(d, b) => {
                    out.push((None, (**d).clone()));
                    cur = b;
                }
                _ => return (out, cur.clone()),
            }
        }
    }

    /// Rebuild from [`Term::telescope`] output.
    pub fn from_telescope(binders: Vec<(Option<String>, Term)>, body: Term) -> Term {
        binders.into_iter().rev().fold(body, |acc, (n, d)| match n {
            Some(n) => pi(&n, d, acc),
            None => arrow(d, acc),
        })
    }

    /// Apply `f` bottom-up to every subterm.
    pub fn map_bottom_up(&self, f: &dyn Fn(Term) -> Term) -> Term {
        let go = |t: &Term| t.map_bottom_up(f);
        let t = match self {
            Term::KTop(c) => ktop(go(c)),
            Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
                rebuild_binder(self, n.clone(), go(d), go(b))
            }
            Term::Arrow(a, b) => arrow(go(a), go(b)),
            Term::Prod(a, b) => prod(go(a), go(b)),
            Term::Sum(a, b) => sum(go(a), go(b)),
            Term::App(h, args) => app(go(h), args.iter().map(go).collect()),
            other => other.clone(),
        };
        f(t)
    }

    /// Does any subterm satisfy `p`?
    pub fn any(&self, p: &dyn Fn(&Term) -> bool) -> bool {
        if p(self) {
            return true;
        }
        match self {
            Term::KTop(c) => c.any(p),
            Term::Pi(_, d, b) | Term::Lam(_, d, b) | Term::Sig(_, d, b) => d.any(p) || b.any(p),
            Term::Arrow(a, b) | Term::Prod(a, b) | Term::Sum(a, b) => a.any(p) || b.any(p),
            Term::App(h, args) => h.any(p) || args.iter().any(|a| a.any(p)),
            _ => false,
        }
    }
}

fn rebuild_binder(like: &Term, n: String, d: Term, b: Term) -> Term {
    match like {
        Term::Pi(..) => Term::Pi(n, Box::new(d), Box::new(b)),
        Term::Lam(..) => Term::Lam(n, Box::new(d), Box::new(b)),
        Term::Sig(..) => Term::Sig(n, Box::new(d), Box::new(b)),
        _ => unreachable!("not a binder"),
    }
}

/// `base`, or `base'`, `base''`, ... avoiding `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut n = base.to_string();
    while taken.contains(&n) {
        n.push('\'');
    }
    n
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::emit::text::term(self, crate::emit::Style::default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_pi(n: &str, body: Term) -> Term {
        pi(n, Term::Set, body)
    }

    #[test]
    fn renaming_is_alpha_equal() {
        assert!(set_pi("A", var("A")).alpha_eq(&set_pi("B", var("B"))));
    }

    #[test]
    fn telescopes_compare_positionally() {
        let a = set_pi("A", set_pi("B", var("A")));
        let b = set_pi("A", set_pi("B", var("B")));
        assert!(!a.alpha_eq(&b));
    }

    #[test]
    fn unused_pi_is_an_arrow() {
        let a = pi("x", var("A"), var("B"));
        assert!(a.alpha_eq(&arrow(var("A"), var("B"))));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (\ y -> x y)[x := y] must not capture
        let t = lam("y", Term::Set, app(var("x"), vec![var("y")]));
        let s = t.subst("x", &var("y"));
        let expect = lam("z", Term::Set, app(var("y"), vec![var("z")]));
        assert!(s.alpha_eq(&expect), "{s:?}");
    }

    #[test]
    fn beta_reduces_hypothesis_application() {
        let h = lam("P", Term::Set, app(var("P"), vec![var("a")]));
        let t = app(h, vec![var("Q")]).beta();
        assert_eq!(t, app(var("Q"), vec![var("a")]));
    }

    #[test]
    fn app_flattens() {
        let t = app(app(var("f"), vec![var("a")]), vec![var("b")]);
        assert_eq!(t.spine().1.len(), 2);
    }

    #[test]
    fn conj_of_nothing_is_top() {
        assert_eq!(conj(vec![]), Term::Top);
        assert_eq!(conj(vec![var("a")]), var("a"));
    }
}
