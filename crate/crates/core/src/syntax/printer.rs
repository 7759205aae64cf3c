use std::collections::{HashMap, HashSet};

use super::{RawCtor, RawTypeExpr, SourceModule, BUILTINS};

/// Deterministic rendering. Binders are renamed `A, B, C, ...` per constructor,
/// skipping any name that would collide with a type constructor.
pub fn print_module(m: &SourceModule) -> String {
    let mut taken: HashSet<String> = BUILTINS.iter().map(|(n, _)| n.to_string()).collect();
    taken.extend(m.decls.iter().map(|d| d.name.clone()));
    let mut out = String::new();
    for (i, d) in m.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("data ");
        out.push_str(&d.name);
        out.push_str(" : ");
        for _ in 0..d.arity {
            out.push_str("Set -> ");
        }
        out.push_str("Set where\n");
        for c in &d.ctors {
            out.push_str("  ");
            print_ctor(c, &taken, &mut out);
            out.push('\n');
        }
    }
    out
}

pub(crate) fn binder_names(count: usize, taken: &HashSet<String>) -> Vec<String> {
    let mut names = Vec::with_capacity(count);
    let mut round = 0usize;
    'outer: loop {
        for ch in 'A'..='Z' {
            let n = if round == 0 {
                ch.to_string()
            } else {
                format!("{ch}{round}")
            };
            if !taken.contains(&n) {
                names.push(n);
                if names.len() == count {
                    break 'outer;
                }
            }
        }
        round += 1;
        if count == 0 {
            break;
        }
    }
    names
}

fn print_ctor(c: &RawCtor, taken: &HashSet<String>, out: &mut String) {
    let fresh = binder_names(c.binders.len(), taken);
    let ren: HashMap<&str, &str> = c
        .binders
        .iter()
        .zip(&fresh)
        .map(|(b, n)| (b.name.as_str(), n.as_str()))
        .collect();
    out.push_str(&c.name);
    out.push_str(" : ");
    if !c.binders.is_empty() {
        out.push_str("forall ");
        let mut i = 0;
        while i < c.binders.len() {
            let imp = c.binders[i].implicit;
            let mut j = i;
            let mut names = Vec::new();
            while j < c.binders.len() && c.binders[j].implicit == imp {
                names.push(fresh[j].as_str());
                j += 1;
            }
            let (open, close) = if imp { ('{', '}') } else { ('(', ')') };
            out.push(open);
            out.push_str(&names.join(" "));
            out.push_str(" : Set");
            out.push(close);
            i = j;
        }
        out.push_str(". ");
    }
    print_type(&c.ty, &ren, 0, out);
}

// precedence levels: 0 arrow, 1 sum, 2 product, 3 application, 4 atom
fn print_type(t: &RawTypeExpr, ren: &HashMap<&str, &str>, prec: u8, out: &mut String) {
    let wrap = |p: u8, out: &mut String, f: &dyn Fn(&mut String)| {
        if p < prec {
            out.push('(');
            f(out);
            out.push(')');
        } else {
            f(out);
        }
    };
    match t {
        RawTypeExpr::Var(n, _) => out.push_str(ren.get(n.as_str()).copied().unwrap_or(n)),
        RawTypeExpr::Unit(_) => out.push_str("Unit"),
        RawTypeExpr::App(n, args, _) if args.is_empty() => out.push_str(n),
        RawTypeExpr::App(n, args, _) => wrap(3, out, &|out| {
            out.push_str(n);
            for a in args {
                out.push(' ');
                print_type(a, ren, 4, out);
            }
        }),
        RawTypeExpr::Prod(a, b) => wrap(2, out, &|out| {
            print_type(a, ren, 3, out);
            out.push_str(" * ");
            print_type(b, ren, 2, out);
        }),
        RawTypeExpr::Sum(a, b) => wrap(1, out, &|out| {
            print_type(a, ren, 2, out);
            out.push_str(" + ");
            print_type(b, ren, 1, out);
        }),
        RawTypeExpr::Arrow(a, b) => wrap(0, out, &|out| {
            print_type(a, ren, 1, out);
            out.push_str(" -> ");
            print_type(b, ren, 0, out);
        }),
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse_module;

    use super::*;

    #[test]
    fn equal_prints_as_two_lines() {
        let m = parse_module("data Equal : Set -> Set -> Set where refl : forall {X : Set}. Equal X X").unwrap();
        assert_eq!(
            print_module(&m),
            "data Equal : Set -> Set -> Set where\n  refl : forall {A : Set}. Equal A A\n"
        );
    }

    #[test]
    fn empty_module_prints_nothing() {
        assert_eq!(print_module(&SourceModule::default()), "");
    }

    #[test]
    fn binder_names_skip_type_names() {
        let taken: HashSet<String> = ["A".to_string(), "C".to_string()].into_iter().collect();
        assert_eq!(binder_names(3, &taken), vec!["B", "D", "E"]);
    }

    #[test]
    fn nested_operators_round_trip() {
        let src =
            "data X : Set -> Set where c : forall {A B : Set}. (A -> B) * (A + B) -> (X A -> B) -> X (A * (B + A))";
        let m = parse_module(src).unwrap();
        let printed = print_module(&m);
        let again = parse_module(&printed).unwrap();
        assert!(m.alpha_eq(&again), "{printed}");
    }
}
