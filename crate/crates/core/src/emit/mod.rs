//! Text and JSON backends. Both are deterministic: equal input yields equal bytes.

pub mod json;
pub mod read;
pub mod text;

/// Glyph selection for text output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Style {
    pub unicode: bool,
}

impl Style {
    pub const ASCII: Style = Style { unicode: false };
    pub const UNICODE: Style = Style { unicode: true };

    fn pick(self, ascii: &'static str, uni: &'static str) -> &'static str {
        if self.unicode {
            uni
        } else {
            ascii
        }
    }
}

use crate::induct::RuleDef;
use crate::lift::LiftingDef;
use crate::term::Term;
use crate::witness::{Postulate, WitnessDef};

/// Anything the engine emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Artifact {
    Lifting(LiftingDef),
    Rule(RuleDef),
    Witness(WitnessDef),
    Postulate(Postulate),
    /// A signature the skeleton relies on without being a postulate proper.
    Auxiliary(Postulate),
}

impl Artifact {
    pub fn name(&self) -> &str {
        match self {
            Artifact::Lifting(l) => &l.name,
            Artifact::Rule(r) => &r.name,
            Artifact::Witness(w) => &w.name,
            Artifact::Postulate(p) | Artifact::Auxiliary(p) => &p.name,
        }
    }

    /// Equal up to the names of bound variables.
    pub fn alpha_eq(&self, other: &Artifact) -> bool {
        match (self, other) {
            (Artifact::Lifting(a), Artifact::Lifting(b)) => {
                a.name == b.name
                    && a.head == b.head
                    && a.signature.alpha_eq(&b.signature)
                    && a.clauses.len() == b.clauses.len()
                    && a.clauses
                        .iter()
                        .zip(&b.clauses)
                        .all(|(x, y)| x.ctor == y.ctor && clause_closure(a, x).alpha_eq(&clause_closure(b, y)))
            }
            (Artifact::Rule(a), Artifact::Rule(b)) => {
                a.name == b.name
                    && a.decl == b.decl
                    && a.kind == b.kind
                    && a.statement.alpha_eq(&b.statement)
                    && a.hypotheses.len() == b.hypotheses.len()
                    && a.hypotheses
                        .iter()
                        .zip(&b.hypotheses)
                        .all(|(x, y)| x.name == y.name && x.ctor == y.ctor && x.term.alpha_eq(&y.term))
            }
            (Artifact::Witness(a), Artifact::Witness(b)) => a.kind == b.kind && a.decl == b.decl && a.alpha_eq(b),
            (Artifact::Postulate(a), Artifact::Postulate(b)) | (Artifact::Auxiliary(a), Artifact::Auxiliary(b)) => {
                a.name == b.name && a.signature.alpha_eq(&b.signature)
            }
            _ => false,
        }
    }
}

/// A lifting clause closed over its binders, for comparison.
fn clause_closure(l: &LiftingDef, c: &crate::lift::LiftClause) -> Term {
    let eq = Term::App(
        Box::new(Term::Data(crate::ir::EQUAL.into())),
        vec![l.lhs(c), c.body.clone()],
    );
    c.binders.iter().rev().fold(eq, |acc, (n, t)| {
        Term::Pi(n.clone(), Box::new(t.clone()), Box::new(acc))
    })
}

pub fn emit_text(a: &Artifact, st: Style) -> String {
    text::artifact(a, st)
}

pub use json::{emit_json, parse_json};
