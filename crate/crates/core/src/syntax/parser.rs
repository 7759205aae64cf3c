use std::collections::{HashMap, HashSet};

use super::lexer::{lex, Tok, Token};
use super::{builtin_arity, RawBinder, RawCtor, RawDecl, RawTypeExpr, SourceModule};
use crate::diag::{DiagCode, Diagnostic, Diagnostics, Span};

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    eof: Span,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.eof, |t| t.span)
    }

    fn prev_span(&self) -> Span {
        self.pos
            .checked_sub(1)
            .and_then(|p| self.toks.get(p))
            .map_or(self.eof, |t| t.span)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let found = self.peek().map_or_else(|| "end of input".to_string(), Tok::describe);
        Diagnostic::new(DiagCode::SyntaxError, format!("expected {wanted}, found {found}")).at(Some(self.peek_span()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.eat(&tok) {
            Ok(self.prev_span())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                let sp = self.peek_span();
                self.pos += 1;
                Ok((s, sp))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn module(&mut self) -> PResult<Vec<RawDecl>> {
        let mut decls = Vec::new();
        while self.peek().is_some() {
            decls.push(self.decl()?);
        }
        Ok(decls)
    }

    fn decl(&mut self) -> PResult<RawDecl> {
        let start = self.expect(Tok::Data)?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let mut arity = 0;
        self.expect(Tok::Set)?;
        while self.eat(&Tok::Arrow) {
            self.expect(Tok::Set)?;
            arity += 1;
        }
        self.expect(Tok::Where)?;
        let mut ctors = Vec::new();
        // A constructor starts with `NAME :`; anything else ends the block.
        while matches!(self.peek(), Some(Tok::Ident(_)))
            && matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Colon))
        {
            ctors.push(self.ctor()?);
        }
        Ok(RawDecl {
            name,
            arity,
            ctors,
            span: start.join(self.prev_span()),
        })
    }

    fn ctor(&mut self) -> PResult<RawCtor> {
        let (name, start) = self.ident()?;
        self.expect(Tok::Colon)?;
        let mut binders = Vec::new();
        if self.eat(&Tok::Forall) {
            loop {
                let (close, implicit) = match self.peek() {
                    Some(Tok::LBrace) => (Tok::RBrace, true),
                    Some(Tok::LParen) => (Tok::RParen, false),
                    _ => break,
                };
                self.bump();
                let mut any = false;
                while let Some(Tok::Ident(_)) = self.peek() {
                    let (n, sp) = self.ident()?;
                    binders.push(RawBinder {
                        name: n,
                        implicit,
                        span: sp,
                    });
                    any = true;
                }
                if !any {
                    return Err(self.unexpected("binder name"));
                }
                self.expect(Tok::Colon)?;
                self.expect(Tok::Set)?;
                self.expect(close)?;
            }
            if binders.is_empty() {
                return Err(self.unexpected("`{` or `(`"));
            }
            self.expect(Tok::Dot)?;
        }
        let ty = self.ctype()?;
        Ok(RawCtor {
            name,
            binders,
            span: start.join(ty.span()),
            ty,
        })
    }

    fn ctype(&mut self) -> PResult<RawTypeExpr> {
        let lhs = self.sum()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.ctype()?;
            Ok(RawTypeExpr::Arrow(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn sum(&mut self) -> PResult<RawTypeExpr> {
        let lhs = self.prod()?;
        if self.eat(&Tok::Plus) {
            let rhs = self.sum()?;
            Ok(RawTypeExpr::Sum(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn prod(&mut self) -> PResult<RawTypeExpr> {
        let lhs = self.app()?;
        if self.eat(&Tok::Star) {
            let rhs = self.prod()?;
            Ok(RawTypeExpr::Prod(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn app(&mut self) -> PResult<RawTypeExpr> {
        if let Some(Tok::Ident(_)) = self.peek() {
            let (head, sp) = self.ident()?;
            let mut args = Vec::new();
            while matches!(self.peek(), Some(Tok::Ident(_) | Tok::LParen | Tok::Unit)) {
                // `NAME :` starts the next constructor, not an argument.
                if matches!(self.peek(), Some(Tok::Ident(_)))
                    && matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Colon))
                {
                    break;
                }
                args.push(self.primary()?);
            }
            let span = args.last().map_or(sp, |a| sp.join(a.span()));
            Ok(RawTypeExpr::App(head, args, span))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> PResult<RawTypeExpr> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let (n, sp) = self.ident()?;
                Ok(RawTypeExpr::App(n, Vec::new(), sp))
            }
            Some(Tok::Unit) => {
                self.bump();
                Ok(RawTypeExpr::Unit(self.prev_span()))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.ctype()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("type")),
        }
    }
}

/// Parse and name-resolve a module. All resolution errors are collected.
pub fn parse_module(text: &str) -> Result<SourceModule, Diagnostics> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        eof: Span::new(text.len(), text.len()),
    };
    let mut decls = p.module().map_err(|d| vec![d])?;
    let mut diags = Vec::new();
    resolve(&mut decls, &mut diags);
    if diags.is_empty() {
        Ok(SourceModule { decls })
    } else {
        Err(diags)
    }
}

fn mentions(t: &RawTypeExpr, out: &mut HashSet<String>) {
    match t {
        RawTypeExpr::App(n, args, _) => {
            out.insert(n.clone());
            for a in args {
                mentions(a, out);
            }
        }
        RawTypeExpr::Prod(a, b) | RawTypeExpr::Sum(a, b) | RawTypeExpr::Arrow(a, b) => {
            mentions(a, out);
            mentions(b, out);
        }
        RawTypeExpr::Var(..) | RawTypeExpr::Unit(_) => {}
    }
}

fn resolve(decls: &mut [RawDecl], diags: &mut Diagnostics) {
    let later: HashMap<String, usize> = decls.iter().enumerate().map(|(i, d)| (d.name.clone(), i)).collect();
    let refs: Vec<HashSet<String>> = decls
        .iter()
        .map(|d| {
            let mut s = HashSet::new();
            for c in &d.ctors {
                mentions(&c.ty, &mut s);
            }
            s
        })
        .collect();

    let mut known: HashMap<String, usize> = HashMap::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, decl) in decls.iter_mut().enumerate() {
        if !seen.insert(decl.name.clone()) {
            diags.push(
                Diagnostic::new(
                    DiagCode::DuplicateDeclaration,
                    format!("duplicate declaration {}", decl.name),
                )
                .at(Some(decl.span)),
            );
            continue;
        }
        known.insert(decl.name.clone(), decl.arity);
        let scope = Scope {
            known: &known,
            later: &later,
            refs: &refs,
            current: i,
        };
        for ctor in &mut decl.ctors {
            let mut binders = HashSet::new();
            for b in &ctor.binders {
                if !binders.insert(b.name.clone()) {
                    diags.push(
                        Diagnostic::new(
                            DiagCode::DuplicateBinder,
                            format!("binder {} bound twice in constructor {}", b.name, ctor.name),
                        )
                        .at(Some(b.span)),
                    );
                }
            }
            scope.resolve_type(&mut ctor.ty, &binders, diags);
            let (_, ret) = ctor.ty.split_arrows();
            let ok = matches!(ret, RawTypeExpr::App(n, _, _) if *n == decl.name);
            if !ok {
                diags.push(
                    Diagnostic::new(
                        DiagCode::BadReturnType,
                        format!("constructor {} must return {}", ctor.name, decl.name),
                    )
                    .at(Some(ret.span())),
                );
            }
        }
    }
}

struct Scope<'a> {
    known: &'a HashMap<String, usize>,
    later: &'a HashMap<String, usize>,
    refs: &'a [HashSet<String>],
    current: usize,
}

impl Scope<'_> {
    fn arity(&self, name: &str) -> Option<usize> {
        self.known.get(name).copied().or_else(|| builtin_arity(name))
    }

    fn resolve_type(&self, t: &mut RawTypeExpr, binders: &HashSet<String>, diags: &mut Diagnostics) {
        match t {
            RawTypeExpr::App(name, args, span) => {
                for a in args.iter_mut() {
                    self.resolve_type(a, binders, diags);
                }
                if binders.contains(name.as_str()) {
                    if args.is_empty() {
                        *t = RawTypeExpr::Var(name.clone(), *span);
                    } else {
                        diags.push(
                            Diagnostic::new(
                                DiagCode::ArityMismatch,
                                format!("type variable {name} cannot be applied"),
                            )
                            .at(Some(*span)),
                        );
                    }
                    return;
                }
                match self.arity(name) {
                    Some(a) if a == args.len() => {}
                    Some(a) => diags.push(
                        Diagnostic::new(
                            DiagCode::ArityMismatch,
                            format!("{name} expects {a} argument(s), got {}", args.len()),
                        )
                        .at(Some(*span)),
                    ),
                    None => {
                        let d = match self.later.get(name.as_str()) {
                            Some(&j) if j > self.current => {
                                if self.refs[j]
                                    .iter()
                                    .any(|r| self.later.get(r).copied() == Some(self.current))
                                {
                                    Diagnostic::new(
                                        DiagCode::MutualRecursion,
                                        format!("mutually recursive declarations are not supported ({name})"),
                                    )
                                } else {
                                    Diagnostic::new(
                                        DiagCode::UnresolvedName,
                                        format!("unresolved name {name} (declared later in the module)"),
                                    )
                                }
                            }
                            _ => Diagnostic::new(DiagCode::UnresolvedName, format!("unresolved name {name}")),
                        };
                        diags.push(d.at(Some(*span)));
                    }
                }
            }
            RawTypeExpr::Prod(a, b) | RawTypeExpr::Sum(a, b) | RawTypeExpr::Arrow(a, b) => {
                self.resolve_type(a, binders, diags);
                self.resolve_type(b, binders, diags);
            }
            RawTypeExpr::Var(..) | RawTypeExpr::Unit(_) => {}
        }
    }
}
