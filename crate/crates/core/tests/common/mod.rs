//! Shared helpers for the integration tests: a seeded generator of
//! grammar-conforming declarations, fixture files, and binder normalisation.

#![allow(dead_code)]

use std::collections::BTreeMap;

use deepind_core::emit::read::{erase_annotations, read_equation, read_term};
use deepind_core::term::Term;
use deepind_core::Env;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// random declarations

struct Gen {
    rng: ChaCha8Rng,
    binders: Vec<&'static str>,
}

impl Gen {
    fn var(&mut self) -> String {
        self.binders.choose(&mut self.rng).unwrap().to_string()
    }

    /// A G-free index expression.
    fn index(&mut self, depth: usize) -> String {
        if depth <= 1 {
            return if self.rng.gen_bool(0.85) {
                self.var()
            } else {
                "Bool".into()
            };
        }
        match self.rng.gen_range(0..5) {
            0 => format!("({} * {})", self.index(depth - 1), self.index(depth - 1)),
            1 => format!("({} -> {})", self.index(depth - 1), self.index(depth - 1)),
            2 => format!("(List {})", self.index(depth - 1)),
            _ => self.index(1),
        }
    }

    fn constant(&mut self) -> String {
        match self.rng.gen_range(0..6) {
            0 => "Bool".into(),
            1 => "String".into(),
            _ => self.var(),
        }
    }

    fn recursive(&mut self, arity: usize) -> String {
        let ks: Vec<String> = (0..arity).map(|_| self.index(2)).collect();
        format!("(G {})", ks.join(" "))
    }

    /// A constructor argument whose shape has depth at most `depth`.
    fn shape(&mut self, depth: usize, arity: usize) -> String {
        let leaf = depth <= 1 || self.rng.gen_bool(0.4);
        if leaf {
            return if self.rng.gen_bool(0.5) {
                self.constant()
            } else {
                self.recursive(arity)
            };
        }
        match self.rng.gen_range(0..4) {
            0 => format!("({} * {})", self.shape(depth - 1, arity), self.shape(depth - 1, arity)),
            1 => format!("({} + {})", self.shape(depth - 1, arity), self.shape(depth - 1, arity)),
            2 => format!("({} -> {})", self.constant(), self.shape(depth - 1, arity)),
            _ => format!("(List {})", self.shape(depth - 1, arity)),
        }
    }
}

/// Source text of one declaration `G`: at most 3 constructors, 3 binders
/// each, argument shapes of depth at most 3.
pub fn random_decl(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = if rng.gen_bool(0.8) { 1 } else { 2 };
    let nctors = rng.gen_range(1..=3);
    let mut src = format!("data G : {}Set where\n", "Set -> ".repeat(arity));
    for c in 0..nctors {
        let nb = rng.gen_range(1..=3);
        let binders = ["A", "B", "C"][..nb].to_vec();
        let mut g = Gen {
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            binders: binders.clone(),
        };
        let ret: Vec<String> = (0..arity)
            .map(|i| {
                if g.rng.gen_bool(0.5) && i < binders.len() {
                    binders[i].to_string()
                } else {
                    g.index(2)
                }
            })
            .collect();
        let nargs = g.rng.gen_range(0..=3);
        let mut ty: Vec<String> = (0..nargs).map(|_| g.shape(3, arity)).collect();
        ty.push(format!("G {}", ret.join(" ")));
        src.push_str(&format!(
            "  c{c} : forall {{{} : Set}}. {}\n",
            binders.join(" "),
            ty.join(" -> ")
        ));
    }
    src
}

// ---------------------------------------------------------------------------
// fixtures

/// A fixture file: `== kind name` headers, each followed by its lines.
pub struct Fixtures {
    pub entries: Vec<(String, String, Vec<String>)>,
}

pub fn fixtures(text: &str) -> Fixtures {
    let mut entries: Vec<(String, String, Vec<String>)> = Vec::new();
    for line in text.lines() {
        let t = line.trim_end();
        if t.trim_start().starts_with('#') || t.trim().is_empty() {
            continue;
        }
        if let Some(h) = t.strip_prefix("== ") {
            let mut it = h.split_whitespace();
            let kind = it.next().unwrap_or_default().to_string();
            let name = it.next().unwrap_or_default().to_string();
            entries.push((kind, name, Vec::new()));
        } else if t.starts_with("  ") {
            // continuation of the previous line
            let last = entries.last_mut().expect("fixture line before any header").2.last_mut();
            let last = last.expect("continuation before any line");
            last.push(' ');
            last.push_str(t.trim());
        } else {
            entries
                .last_mut()
                .expect("fixture line before any header")
                .2
                .push(t.to_string());
        }
    }
    Fixtures { entries }
}

impl Fixtures {
    pub fn get(&self, kind: &str, name: &str) -> &[String] {
        self.entries
            .iter()
            .find(|(k, n, _)| k == kind && n == name)
            .map(|(_, _, ls)| ls.as_slice())
            .unwrap_or_else(|| panic!("no fixture {kind} {name}"))
    }
}

// ---------------------------------------------------------------------------
// normalisation

fn occurrences(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::KTop(c) => occurrences(c, out),
        Term::Pi(_, d, b) | Term::Lam(_, d, b) | Term::Sig(_, d, b) => {
            occurrences(d, out);
            occurrences(b, out);
        }
        Term::Arrow(a, b) | Term::Prod(a, b) | Term::Sum(a, b) => {
            occurrences(a, out);
            occurrences(b, out);
        }
        Term::App(h, xs) => {
            occurrences(h, out);
            xs.iter().for_each(|x| occurrences(x, out));
        }
        _ => {}
    }
}

/// Canonical order of a telescope: a binder may only move past binders its
/// domain does not mention, and otherwise follows first use in the body.
/// Returns the permutation (new position -> old position).
pub fn telescope_order(bs: &[(String, Term)], body: &Term) -> Vec<usize> {
    let mut occ = Vec::new();
    occurrences(body, &mut occ);
    let key = |n: &str| occ.iter().position(|x| x == n).unwrap_or(usize::MAX);
    let mut placed: Vec<usize> = Vec::new();
    while placed.len() < bs.len() {
        let next = (0..bs.len())
            .filter(|i| !placed.contains(i))
            .filter(|&i| (0..i).all(|j| placed.contains(&j) || !bs[i].1.mentions_var(&bs[j].0)))
            .min_by_key(|&i| (key(&bs[i].0), i))
            .expect("a telescope always has a placeable binder");
        placed.push(next);
    }
    placed
}

/// Reorder every maximal run of `forall` binders into canonical order.
pub fn normalize_telescopes(t: &Term) -> Term {
    match t {
        Term::Pi(..) => {
            let mut bs = Vec::new();
            let mut cur = t;
            while let Term::Pi(n, d, b) = cur {
                bs.push((n.clone(), normalize_telescopes(d)));
                cur = b;
            }
            let body = normalize_telescopes(cur);
            let order = telescope_order(&bs, &body);
            order.iter().rev().fold(body, |acc, &i| {
                Term::Pi(bs[i].0.clone(), Box::new(bs[i].1.clone()), Box::new(acc))
            })
        }
        Term::Lam(n, d, b) => Term::Lam(
            n.clone(),
            Box::new(normalize_telescopes(d)),
            Box::new(normalize_telescopes(b)),
        ),
        Term::Sig(n, d, b) => Term::Sig(
            n.clone(),
            Box::new(normalize_telescopes(d)),
            Box::new(normalize_telescopes(b)),
        ),
        Term::Arrow(a, b) => Term::Arrow(Box::new(normalize_telescopes(a)), Box::new(normalize_telescopes(b))),
        Term::Prod(a, b) => Term::Prod(Box::new(normalize_telescopes(a)), Box::new(normalize_telescopes(b))),
        Term::Sum(a, b) => Term::Sum(Box::new(normalize_telescopes(a)), Box::new(normalize_telescopes(b))),
        Term::App(h, xs) => Term::App(
            Box::new(normalize_telescopes(h)),
            xs.iter().map(normalize_telescopes).collect(),
        ),
        t => t.clone(),
    }
}

/// Equal after erasing unprinted annotations, reordering telescopes, and
/// renaming bound variables.
pub fn same_up_to_binders(a: &Term, b: &Term) -> bool {
    normalize_telescopes(&erase_annotations(a)).alpha_eq(&normalize_telescopes(&erase_annotations(b)))
}

/// Bind the free variables of an equation in order of first occurrence,
/// so that two clauses compare up to renaming of their pattern variables.
pub fn close_equation(l: &Term, r: &Term) -> Term {
    let eq = Term::App(Box::new(Term::Data("=".into())), vec![l.clone(), r.clone()]);
    let mut occ = Vec::new();
    occurrences(&eq, &mut occ);
    let free = eq.free_vars();
    let mut order: Vec<String> = Vec::new();
    for v in occ {
        if free.contains(&v) && !order.contains(&v) {
            order.push(v);
        }
    }
    order
        .iter()
        .rev()
        .fold(eq, |acc, v| Term::Pi(v.clone(), Box::new(Term::Set), Box::new(acc)))
}

pub fn term(src: &str, env: &Env) -> Term {
    read_term(src, env).unwrap_or_else(|e| panic!("fixture does not parse: {e}\n{src}"))
}

pub fn equation(src: &str, env: &Env) -> (Term, Term) {
    read_equation(src, env).unwrap_or_else(|e| panic!("fixture does not parse: {e}\n{src}"))
}

/// Telescope of a hypothesis `\ P.. -> forall (x..) -> ..`: binder names in order.
pub fn hypothesis_binders(t: &Term) -> (Vec<(String, Term)>, Term) {
    let mut cur = t;
    while let Term::Lam(_, _, b) = cur {
        cur = b;
    }
    let mut bs = Vec::new();
    while let Term::Pi(n, d, b) = cur {
        bs.push((n.clone(), (**d).clone()));
        cur = b;
    }
    (bs, cur.clone())
}

/// Apply the canonical telescope order of each hypothesis to the arguments
/// the clause passes to it, so that argument order follows binder order.
pub fn reorder_hyp_args(rhs: &Term, hyps: &BTreeMap<String, Vec<usize>>) -> Term {
    rhs.map_bottom_up(&|t| match t {
        Term::App(h, xs) => match &*h {
            Term::Var(c) if hyps.contains_key(c) => {
                let order = &hyps[c];
                if xs.len() < order.len() {
                    return Term::App(h, xs);
                }
                let mut ys: Vec<Term> = order.iter().map(|&i| xs[i].clone()).collect();
                ys.extend(xs[order.len()..].iter().cloned());
                Term::App(h, ys)
            }
            _ => Term::App(h, xs),
        },
        t => t,
    })
}
