//! Reader for the ASCII text format, the inverse of [`super::text::term`]
//! up to what the printer drops: `exists` domains and `K_T` carriers come
//! back as `Set`.
//!
//! Witness clauses read as terms too: tuples become applications of the
//! constructor `,` and untyped lambdas get `Set` domains.
//!
//! Identifiers resolve in this order: bound names, `X^` liftings, `K_T`,
//! declared or builtin type names, constructor names, `dInd..`/`ind..`
//! hypothesis names, and otherwise free variables.

use std::collections::BTreeSet;

use crate::ir::Env;
use crate::lift::{ARR, PAIR, SUM, UNIT};
use crate::term::Term;

const BUILTIN_TYPES: &[&str] = &["Bool", "String", "Nat", UNIT, PAIR, SUM, ARR];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let ident = |c: char| c.is_alphanumeric() || c == '_' || c == '\'' || c == '^' || c == '#';
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push(Tok::Sym("->"));
            i += 2;
        } else if let Some(sym) = ["(", ")", ":", "*", "+", ".", "\\", "=", ","]
            .iter()
            .find(|s| s.starts_with(c))
        {
            out.push(Tok::Sym(sym));
            i += 1;
        } else if ident(c) {
            let start = i;
            while i < cs.len() && ident(cs[i]) {
                i += 1;
            }
            out.push(Tok::Id(cs[start..i].iter().collect()));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<Tok>,
    pos: usize,
    bound: Vec<String>,
    types: BTreeSet<String>,
    ctors: BTreeSet<String>,
}

fn is_hyp(n: &str) -> bool {
    ["dInd", "ind"].iter().any(|p| {
        n.strip_prefix(p)
            .and_then(|r| r.chars().next())
            .is_some_and(char::is_uppercase)
    })
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), String> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(format!("expected {s:?} at token {}, found {:?}", self.pos, self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Id(x)) if x != "forall" && x != "exists" => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            t => Err(format!("expected an identifier, found {t:?}")),
        }
    }

    fn keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Id(x)) if x == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn resolve(&self, x: &str) -> Term {
        if self.bound.iter().any(|b| b == x) {
            return Term::Var(x.to_string());
        }
        if let Some(h) = x.strip_suffix('^') {
            return Term::Lift(h.to_string());
        }
        match x {
            "Set" => Term::Set,
            "Top" => Term::Top,
            "PredMap" => Term::PredMap,
            "K_T" => Term::KTop(Box::new(Term::Set)),
            _ if self.types.contains(x) => Term::Data(x.to_string()),
            _ if self.ctors.contains(x) => Term::Ctor(x.to_string()),
            _ if is_hyp(x) => Term::Hyp(x.to_string()),
            _ => Term::Var(x.to_string()),
        }
    }

    /// `(x y : T) (z : U) ...` followed by `->`; binders scope over later groups.
    fn groups(&mut self) -> Result<Vec<(String, Term)>, String> {
        let mut out = Vec::new();
        while self.eat("(") {
            let mut names = vec![self.ident()?];
            while let Some(Tok::Id(_)) = self.peek() {
                names.push(self.ident()?);
            }
            self.expect(":")?;
            let d = self.expr()?;
            self.expect(")")?;
            for n in names {
                out.push((n.clone(), d.clone()));
                self.bound.push(n);
            }
        }
        if out.is_empty() {
            return Err("a binder needs at least one group".into());
        }
        self.expect("->")?;
        Ok(out)
    }

    fn binder(&mut self, mk: fn(String, Box<Term>, Box<Term>) -> Term) -> Result<Term, String> {
        let depth = self.bound.len();
        let gs = self.groups()?;
        let body = self.expr()?;
        self.bound.truncate(depth);
        Ok(gs
            .into_iter()
            .rev()
            .fold(body, |acc, (n, d)| mk(n, Box::new(d), Box::new(acc))))
    }

    fn expr(&mut self) -> Result<Term, String> {
        if self.keyword("forall") {
            return self.binder(Term::Pi);
        }
        if self.eat("\\") {
            // untyped binders, as in witness clauses
            if let Some(Tok::Id(_)) = self.peek() {
                let depth = self.bound.len();
                let mut names = Vec::new();
                while let Some(Tok::Id(_)) = self.peek() {
                    let n = self.ident()?;
                    self.bound.push(n.clone());
                    names.push(n);
                }
                self.expect("->")?;
                let body = self.expr();
                self.bound.truncate(depth);
                return Ok(names
                    .into_iter()
                    .rev()
                    .fold(body?, |acc, n| Term::Lam(n, Box::new(Term::Set), Box::new(acc))));
            }
            return self.binder(Term::Lam);
        }
        if self.keyword("exists") {
            let n = self.ident()?;
            self.expect(".")?;
            self.bound.push(n.clone());
            let body = self.expr();
            self.bound.pop();
            return Ok(Term::Sig(n, Box::new(Term::Set), Box::new(body?)));
        }
        let a = self.sum()?;
        if self.eat("->") {
            Ok(Term::Arrow(Box::new(a), Box::new(self.expr()?)))
        } else {
            Ok(a)
        }
    }

    fn sum(&mut self) -> Result<Term, String> {
        let a = self.prod()?;
        if self.eat("+") {
            Ok(Term::Sum(Box::new(a), Box::new(self.sum()?)))
        } else {
            Ok(a)
        }
    }

    fn prod(&mut self) -> Result<Term, String> {
        let a = self.spine()?;
        if self.eat("*") {
            Ok(Term::Prod(Box::new(a), Box::new(self.prod()?)))
        } else {
            Ok(a)
        }
    }

    fn spine(&mut self) -> Result<Term, String> {
        let h = self
            .atom()?
            .ok_or_else(|| format!("expected a term at token {}", self.pos))?;
        let mut args = Vec::new();
        while let Some(a) = self.atom()? {
            args.push(a);
        }
        Ok(if args.is_empty() {
            h
        } else {
            Term::App(Box::new(h), args)
        })
    }

    fn atom(&mut self) -> Result<Option<Term>, String> {
        match self.peek() {
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.eat(",") {
                    items.push(self.expr()?);
                }
                self.expect(")")?;
                Ok(Some(if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    Term::App(Box::new(Term::Ctor(",".into())), items)
                }))
            }
            Some(Tok::Id(x)) if x != "forall" && x != "exists" => {
                let x = x.clone();
                self.pos += 1;
                Ok(Some(self.resolve(&x)))
            }
            _ => Ok(None),
        }
    }
}

fn reader(src: &str, env: &Env) -> Result<Reader, String> {
    let mut types: BTreeSet<String> = BUILTIN_TYPES.iter().map(|s| s.to_string()).collect();
    let mut ctors = BTreeSet::new();
    for d in env.all() {
        types.insert(d.name.clone());
        ctors.extend(d.ctors.iter().map(|c| c.name.clone()));
    }
    Ok(Reader {
        toks: lex(src)?,
        pos: 0,
        bound: Vec::new(),
        types,
        ctors,
    })
}

/// Parse one term; names are resolved against `env`.
pub fn read_term(src: &str, env: &Env) -> Result<Term, String> {
    let mut r = reader(src, env)?;
    let t = r.expr()?;
    if r.pos != r.toks.len() {
        return Err(format!("trailing input at token {}: {:?}", r.pos, r.peek()));
    }
    Ok(t)
}

/// Parse `lhs = rhs`.
pub fn read_equation(src: &str, env: &Env) -> Result<(Term, Term), String> {
    let mut r = reader(src, env)?;
    let l = r.expr()?;
    r.expect("=")?;
    let rhs = r.expr()?;
    if r.pos != r.toks.len() {
        return Err(format!("trailing input at token {}: {:?}", r.pos, r.peek()));
    }
    Ok((l, rhs))
}

/// Replace what the text format cannot carry, so that read and derived
/// terms compare structurally.
pub fn erase_annotations(t: &Term) -> Term {
    t.map_bottom_up(&|t| match t {
        Term::KTop(_) => Term::KTop(Box::new(Term::Set)),
        Term::Sig(n, _, b) => Term::Sig(n, Box::new(Term::Set), b),
        t => t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::emit::text::term;
    use crate::emit::Style;
    use crate::induct::{derive_deep_rule, derive_structural_rule};
    use crate::lift::derive_data_lifting;

    #[test]
    fn reads_back_every_corpus_statement_and_clause() {
        let env = Env::from_source(corpus::ALL).unwrap();
        for d in env.module_decls() {
            if !crate::pipeline::diagnose(d, &env).is_empty() {
                continue;
            }
            let mut ts = vec![];
            for r in [
                derive_deep_rule(d, &env).unwrap(),
                derive_structural_rule(d, &env).unwrap(),
            ] {
                ts.push(r.statement.clone());
                ts.extend(r.hypotheses.iter().map(|h| h.term.clone()));
            }
            let l = derive_data_lifting(d, &env).unwrap();
            ts.push(l.signature.clone());
            ts.extend(l.clauses.iter().map(|c| c.body.clone()));
            for t in ts {
                let back = read_term(&term(&t, Style::ASCII), &env).unwrap();
                assert!(back.alpha_eq(&erase_annotations(&t)), "{t}\n{back}");
            }
        }
    }

    #[test]
    fn equation_and_errors() {
        let env = Env::prelude();
        let (l, r) = read_equation("List^ A Q nil = Top", &env).unwrap();
        assert_eq!(l.to_string(), "List^ A Q nil");
        assert_eq!(r, Term::Top);
        assert!(read_term("forall -> A", &env).is_err());
        assert!(read_term("A )", &env).is_err());
    }
}
