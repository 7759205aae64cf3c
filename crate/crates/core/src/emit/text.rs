//! Proof-assistant-flavoured text.
//!
//! ```text
//! dIndEqual : forall (P : forall (A B : Set) -> (A -> Set) -> (B -> Set) -> Equal A B -> Set) ->
//!   dIndRefl P ->
//!   forall (A B : Set) (Q_A : A -> Set) (Q_B : B -> Set) (e : Equal A B) ->
//!   Equal^ A B Q_A Q_B e ->
//!   P A B Q_A Q_B e
//! ```

use super::{Artifact, Style};
use crate::term::Term;
use crate::witness::{WClause, WTerm};

// precedence: 0 binders and arrows, 1 sum, 2 product, 3 application, 4 atom
fn level(t: &Term) -> u8 {
    match t {
        Term::Pi(..) | Term::Lam(..) | Term::Sig(..) | Term::Arrow(..) => 0,
        Term::Sum(..) => 1,
        Term::Prod(..) => 2,
        Term::App(..) => 3,
        _ => 4,
    }
}

pub fn term(t: &Term, st: Style) -> String {
    let mut out = String::new();
    write_term(t, 0, st, &mut out);
    out
}

fn write_term(t: &Term, prec: u8, st: Style, out: &mut String) {
    if level(t) < prec {
        out.push('(');
        write_inner(t, st, out);
        out.push(')');
    } else {
        write_inner(t, st, out);
    }
}

fn write_inner(t: &Term, st: Style, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Set => out.push_str("Set"),
        Term::Top => out.push_str(st.pick("Top", "⊤")),
        Term::Data(n) | Term::Ctor(n) | Term::Hyp(n) => out.push_str(n),
        Term::Lift(n) => {
            out.push_str(n);
            out.push('^');
        }
        Term::PredMap => out.push_str("PredMap"),
        Term::KTop(_) => out.push_str(st.pick("K_T", "K_⊤")),
        Term::App(h, args) => {
            write_term(h, 4, st, out);
            for a in args {
                out.push(' ');
                write_term(a, 4, st, out);
            }
        }
        Term::Prod(a, b) => {
            write_term(a, 3, st, out);
            out.push_str(st.pick(" * ", " × "));
            write_term(b, 2, st, out);
        }
        Term::Sum(a, b) => {
            write_term(a, 2, st, out);
            out.push_str(" + ");
            write_term(b, 1, st, out);
        }
        Term::Arrow(a, b) => {
            write_term(a, 1, st, out);
            out.push_str(st.pick(" -> ", " → "));
            write_term(b, 0, st, out);
        }
        Term::Pi(..) => {
            let (groups, body) = binder_groups(t, |t| match t {
                Term::Pi(n, d, b) => Some((n, d, b)),
                _ => None,
            });
            out.push_str(st.pick("forall ", "∀ "));
            write_groups(&groups, st, out);
            out.push_str(st.pick(" -> ", " → "));
            write_term(body, 0, st, out);
        }
        Term::Lam(..) => {
            let (groups, body) = binder_groups(t, |t| match t {
                Term::Lam(n, d, b) => Some((n, d, b)),
                _ => None,
            });
            out.push_str(st.pick("\\ ", "λ "));
            write_groups(&groups, st, out);
            out.push_str(st.pick(" -> ", " → "));
            write_term(body, 0, st, out);
        }
        Term::Sig(n, _, b) => {
            if st.unicode {
                out.push_str("∃[");
                out.push_str(n);
                out.push_str("] ");
            } else {
                out.push_str("exists ");
                out.push_str(n);
                out.push_str(" . ");
            }
            write_term(b, 0, st, out);
        }
    }
}

type Group<'a> = (Vec<&'a str>, &'a Term);

/// Consecutive binders of one kind, merged when their domains coincide.
fn binder_groups<'a>(
    t: &'a Term,
    peel: impl Fn(&'a Term) -> Option<(&'a String, &'a Term, &'a Term)>,
) -> (Vec<Group<'a>>, &'a Term) {
    let mut groups: Vec<Group<'a>> = Vec::new();
    let mut cur = t;
    while let Some((n, d, b)) = peel(cur) {
        match groups.last_mut() {
            Some((names, dom)) if *dom == d && !names.iter().any(|x| d.mentions_var(x)) => names.push(n),
            _ => groups.push((vec![n], d)),
        }
        cur = b;
    }
    (groups, cur)
}

fn write_groups(groups: &[Group<'_>], st: Style, out: &mut String) {
    for (i, (names, dom)) in groups.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push('(');
        out.push_str(&names.join(" "));
        out.push_str(" : ");
        write_term(dom, 0, st, out);
        out.push(')');
    }
}

/// A rule statement laid out one premise per line: the outermost binder
/// group stays on the first line, later segments are indented two spaces.
pub fn statement(t: &Term, st: Style) -> String {
    let arrow = st.pick(" ->", " →");
    let mut segs: Vec<String> = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Pi(..) => {
                let mut groups = Vec::new();
                while let Term::Pi(n, d, b) = cur {
                    groups.push((n, d));
                    cur = b;
                }
                let mut s = String::from(st.pick("forall ", "∀ "));
                let pis = groups.iter().rev().fold(Term::Set, |acc, (n, d)| {
                    Term::Pi((*n).clone(), (*d).clone(), Box::new(acc))
                });
                let (gs, _) = binder_groups(&pis, |t| match t {
                    Term::Pi(n, d, b) => Some((n, d, b)),
                    _ => None,
                });
                write_groups(&gs, st, &mut s);
                segs.push(s);
            }
            Term::Arrow(a, b) => {
                let mut s = String::new();
                write_term(a, 1, st, &mut s);
                segs.push(s);
                cur = b;
            }
            other => {
                segs.push(term(other, st));
                break;
            }
        }
    }
    let last = segs.len() - 1;
    let mut out = String::new();
    for (i, s) in segs.iter().enumerate() {
        if i > 0 {
            out.push_str("\n  ");
        }
        out.push_str(s);
        if i < last {
            out.push_str(arrow);
        }
    }
    out
}

fn wlevel(t: &WTerm) -> u8 {
    match t {
        WTerm::Lam(..) | WTerm::Case(..) => 0,
        WTerm::App(h, xs) if matches!(&**h, WTerm::Ctor(c) if c == ",") && xs.len() == 2 => 4,
        WTerm::App(..) | WTerm::HypCall(..) | WTerm::SelfCall { .. } | WTerm::MapCall { .. } => 3,
        WTerm::Type(t) => level(t),
        _ => 4,
    }
}

pub fn wterm(t: &WTerm, st: Style) -> String {
    let mut out = String::new();
    write_w(t, 0, st, &mut out);
    out
}

fn write_w(t: &WTerm, prec: u8, st: Style, out: &mut String) {
    if wlevel(t) < prec {
        out.push('(');
        write_w_inner(t, st, out);
        out.push(')');
    } else {
        write_w_inner(t, st, out);
    }
}

fn write_spine<'a>(head: &str, args: impl IntoIterator<Item = &'a WTerm>, st: Style, out: &mut String) {
    out.push_str(head);
    for a in args {
        out.push(' ');
        write_w(a, 4, st, out);
    }
}

fn write_w_inner(t: &WTerm, st: Style, out: &mut String) {
    match t {
        WTerm::Var(v) | WTerm::Ctor(v) | WTerm::Global(v) | WTerm::Postulate(v) => out.push_str(v),
        WTerm::TT => out.push_str("tt"),
        WTerm::Type(ty) => write_term(ty, 0, st, out),
        WTerm::Tuple(xs) => {
            out.push('(');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_w(x, 0, st, out);
            }
            out.push(')');
        }
        WTerm::App(h, xs) => {
            if let (WTerm::Ctor(c), [a, b]) = (&**h, xs.as_slice()) {
                if c == "," {
                    return write_w_inner(&WTerm::Tuple(vec![a.clone(), b.clone()]), st, out);
                }
            }
            write_w(h, 4, st, out);
            for a in xs {
                out.push(' ');
                write_w(a, 4, st, out);
            }
        }
        WTerm::HypCall(c, xs) => write_spine(c, xs, st, out),
        WTerm::SelfCall {
            head,
            args,
            scrutinee,
            evidence,
        } => write_spine(
            head,
            args.iter().chain(scrutinee.as_deref()).chain(evidence.as_deref()),
            st,
            out,
        ),
        WTerm::MapCall {
            map,
            args,
            scrutinee,
            evidence,
        } => write_spine(map, args.iter().chain([&**scrutinee, &**evidence]), st, out),
        WTerm::Lam(vs, b) => {
            out.push_str(st.pick("\\ ", "λ "));
            out.push_str(&vs.join(" "));
            out.push_str(st.pick(" -> ", " → "));
            write_w(b, 0, st, out);
        }
        WTerm::Case(s, arms) => {
            out.push_str("case ");
            write_w(s, 1, st, out);
            out.push_str(" of { ");
            for (i, (p, b)) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                write_w(p, 1, st, out);
                out.push_str(st.pick(" -> ", " → "));
                write_w(b, 0, st, out);
            }
            out.push_str(" }");
        }
    }
}

/// `name lhs.. = rhs`
pub fn wclause(name: &str, c: &WClause, st: Style) -> String {
    let mut out = String::new();
    write_spine(name, &c.lhs, st, &mut out);
    out.push_str(" = ");
    write_w(&c.rhs, 0, st, &mut out);
    out
}

/// `name p.. = body` for an abstraction over the rule parameters.
fn definition(name: &str, t: &Term, st: Style) -> String {
    let mut out = String::from(name);
    let mut cur = t;
    while let Term::Lam(n, _, b) = cur {
        out.push(' ');
        out.push_str(n);
        cur = b;
    }
    out.push_str(" = ");
    out.push_str(&statement(cur, st));
    out
}

/// Full text of an artifact: a signature line followed by its clauses.
pub fn artifact(a: &Artifact, st: Style) -> String {
    let mut lines = Vec::new();
    match a {
        Artifact::Lifting(l) => {
            lines.push(format!("{} : {}", term(&l.head, st), term(&l.signature, st)));
            for c in &l.clauses {
                lines.push(format!("{} = {}", term(&l.lhs(c), st), term(&c.body, st)));
            }
        }
        Artifact::Rule(r) => {
            for h in &r.hypotheses {
                lines.push(definition(&h.name, &h.term, st));
            }
            lines.push(format!("{} : {}", r.name, statement(&r.statement, st)));
        }
        Artifact::Witness(w) => {
            lines.push(format!("{} : {}", w.name, statement(&w.signature, st)));
            for c in &w.clauses {
                lines.push(wclause(&w.name, c, st));
            }
        }
        Artifact::Postulate(p) => lines.push(format!("postulate {} : {}", p.name, term(&p.signature, st))),
        Artifact::Auxiliary(p) => lines.push(format!("{} : {}", p.name, term(&p.signature, st))),
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::*;

    #[test]
    fn groups_equal_domains() {
        let t = pi(
            "A",
            Term::Set,
            pi("B", Term::Set, app(data("Equal"), vec![var("A"), var("B")])),
        );
        assert_eq!(term(&t, Style::ASCII), "forall (A B : Set) -> Equal A B");
        assert_eq!(term(&t, Style::UNICODE), "∀ (A B : Set) → Equal A B");
    }

    #[test]
    fn products_and_arrows() {
        let t = arrow(prod(var("A"), var("B")), arrow(var("C"), var("D")));
        assert_eq!(term(&t, Style::ASCII), "A * B -> C -> D");
        let t = app(data("Seq"), vec![prod(var("B"), var("C"))]);
        assert_eq!(term(&t, Style::ASCII), "Seq (B * C)");
        let t = arrow(arrow(var("A"), var("B")), var("C"));
        assert_eq!(term(&t, Style::ASCII), "(A -> B) -> C");
    }

    #[test]
    fn existentials() {
        let t = sig(
            "Q_B",
            pred_ty(var("B")),
            prod(app(var("Q_B"), vec![var("b")]), Term::Top),
        );
        assert_eq!(term(&t, Style::ASCII), "exists Q_B . Q_B b * Top");
        assert_eq!(term(&t, Style::UNICODE), "∃[Q_B] Q_B b × ⊤");
    }

    #[test]
    fn statement_layout() {
        let t = pi(
            "P",
            Term::Set,
            arrow(app(Term::Hyp("dIndRefl".into()), vec![var("P")]), var("P")),
        );
        assert_eq!(statement(&t, Style::ASCII), "forall (P : Set) ->\n  dIndRefl P ->\n  P");
    }
}
