//! Structural rules recovered from deep rules.
//!
//! Works on the inlined deep statement only: every custom predicate binder
//! is instantiated at `K_T` and removed, premises that are then trivially
//! inhabited are erased, and the predicate slots of `P` are dropped when
//! every use of `P` fills them with constantly-true predicates. Retained
//! types are never rewritten, since `Pair^ A B K_T K_T` is only isomorphic
//! to `K_T`, not equal to it.

use crate::term::*;

/// Is `t` a predicate that holds of everything?
pub fn is_trivial_pred(t: &Term) -> bool {
    match t.spine() {
        (Term::KTop(_), []) => true,
        (Term::Lift(_), args) if !args.is_empty() => {
            let n = args.len() / 2;
            args[n..2 * n].iter().all(is_trivial_pred)
        }
        _ => false,
    }
}

/// Is `t` a proposition that holds by construction?
pub fn is_trivial_prop(t: &Term) -> bool {
    match t {
        Term::Top => true,
        Term::App(h, args) => match &**h {
            Term::KTop(_) => true,
            Term::Lift(_) => {
                let n = args.len() / 2;
                args.len() % 2 == 1 && args[n..2 * n].iter().all(is_trivial_pred)
            }
            _ => false,
        },
        _ => false,
    }
}

fn is_pred_binder(name: &str, dom: &Term, p: &str) -> Option<Term> {
    match dom {
        Term::Arrow(x, s) if **s == Term::Set && name != p => Some((**x).clone()),
        _ => None,
    }
}

fn specialise(t: &Term, p: &str) -> Term {
    match t {
        Term::Pi(n, d, b) => {
            if let Some(x) = is_pred_binder(n, d, p) {
                return specialise(&b.subst(n, &ktop(x)), p);
            }
            pi(n, specialise(d, p), specialise(b, p))
        }
        Term::Arrow(a, b) => {
            let a2 = specialise(a, p);
            if is_trivial_prop(&a2) {
                specialise(b, p)
            } else {
                arrow(a2, specialise(b, p))
            }
        }
        Term::Lam(n, d, b) => lam(n, specialise(d, p), specialise(b, p)),
        _ => t.clone(),
    }
}

fn p_uses<'a>(t: &'a Term, p: &str, out: &mut Vec<&'a [Term]>) {
    match t {
        Term::App(h, args) => {
            if **h == var(p) {
                out.push(args);
            }
            p_uses(h, p, out);
            args.iter().for_each(|a| p_uses(a, p, out));
        }
        Term::Pi(_, d, b) | Term::Lam(_, d, b) | Term::Sig(_, d, b) => {
            p_uses(d, p, out);
            p_uses(b, p, out);
        }
        Term::Arrow(a, b) | Term::Prod(a, b) | Term::Sum(a, b) => {
            p_uses(a, p, out);
            p_uses(b, p, out);
        }
        Term::KTop(c) => p_uses(c, p, out),
        _ => {}
    }
}

fn drop_slots(t: &Term, p: &str, n: usize) -> Term {
    t.map_bottom_up(&|t| match &t {
        Term::App(h, args) if **h == var(p) && args.len() >= 2 * n => {
            let mut xs = args[..n].to_vec();
            xs.extend(args[2 * n..].iter().cloned());
            app(var(p), xs)
        }
        _ => t,
    })
}

/// Specialise an inlined deep statement `forall .. (P : ..) .. -> ..` to
/// its structural form.
pub fn structural_from_deep(deep: &Term, p: &str) -> Term {
    let t = specialise(deep, p);
    // P's type: forall (A.. : Set) -> (A -> Set).. -> G A.. -> Set
    let Some(pty) = find_binder(&t, p) else { return t };
    let (tele, _) = pty.telescope();
    let n = tele
        .iter()
        .take_while(|(name, d)| name.is_some() && *d == Term::Set)
        .count();
    let slots = tele[n..]
        .iter()
        .take(n)
        .filter(|(_, d)| matches!(d, Term::Arrow(_, s) if **s == Term::Set))
        .count();
    if n == 0 || slots != n {
        return t;
    }
    let mut uses = Vec::new();
    p_uses(&t, p, &mut uses);
    let all_trivial = uses
        .iter()
        .all(|args| args.len() >= 2 * n && args[n..2 * n].iter().all(is_trivial_pred));
    if !all_trivial {
        return t;
    }
    let new_ty = {
        let (mut tele, body) = pty.telescope();
        tele.drain(n..2 * n);
        Term::from_telescope(tele, body)
    };
    replace_binder_type(&drop_slots(&t, p, n), p, &new_ty)
}

fn find_binder(t: &Term, p: &str) -> Option<Term> {
    match t {
        Term::Pi(n, d, b) | Term::Lam(n, d, b) => {
            if n == p {
                Some((**d).clone())
            } else {
                find_binder(b, p)
            }
        }
        Term::Arrow(_, b) => find_binder(b, p),
        _ => None,
    }
}

fn replace_binder_type(t: &Term, p: &str, ty: &Term) -> Term {
    match t {
        Term::Pi(n, _, b) if n == p => pi(n, ty.clone(), (**b).clone()),
        Term::Pi(n, d, b) => pi(n, (**d).clone(), replace_binder_type(b, p, ty)),
        Term::Arrow(a, b) => arrow((**a).clone(), replace_binder_type(b, p, ty)),
        _ => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::induct::{derive_deep_rule, derive_structural_rule};
    use crate::ir::Env;

    #[test]
    fn trivial_predicates() {
        let kt = ktop(var("A"));
        assert!(is_trivial_pred(&kt));
        assert!(is_trivial_pred(&app(
            lift("Pair"),
            vec![var("A"), var("A"), kt.clone(), kt.clone()]
        )));
        assert!(!is_trivial_pred(&app(
            lift("Pair"),
            vec![var("A"), var("A"), kt.clone(), var("Q")]
        )));
        assert!(is_trivial_prop(&app(kt.clone(), vec![var("a")])));
        assert!(!is_trivial_prop(&app(var("P"), vec![var("A"), kt, var("x")])));
    }

    #[test]
    fn equal_structural_rule() {
        let env = Env::from_source(corpus::EQUAL).unwrap();
        let d = env.get("Equal").unwrap();
        let deep = derive_deep_rule(d, &env).unwrap();
        let got = structural_from_deep(&deep.inlined(), "P");
        assert_eq!(
            got.to_string(),
            "forall (P : forall (A B : Set) -> Equal A B -> Set) -> (forall (C : Set) -> P C C refl) -> \
             forall (A B : Set) (e : Equal A B) -> P A B e"
        );
    }

    #[test]
    fn agrees_with_direct_structural_rules() {
        let env = Env::from_source(corpus::ALL).unwrap();
        for d in env.all() {
            let deep = derive_deep_rule(d, &env).unwrap();
            let direct = derive_structural_rule(d, &env).unwrap();
            let via = structural_from_deep(&deep.inlined(), "P");
            assert!(
                via.alpha_eq(&direct.inlined()),
                "{}:\n{}\n{}",
                d.name,
                via,
                direct.inlined()
            );
        }
    }
}
