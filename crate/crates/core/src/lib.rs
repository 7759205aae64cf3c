//! Derivation engine for deep induction over GADTs.
//!
//! The pipeline is: [`syntax::parse_module`] → [`ir::Env`] (resolution and
//! classification) → [`encode::henry_ford`] → [`lift`] (predicate liftings)
//! → [`induct`] (hypotheses, rules, witnesses) → [`emit`].
//! [`interp`] is a finite-model oracle used to cross-check the liftings.

pub mod corpus;
pub mod diag;
pub mod emit;
pub mod encode;
pub mod induct;
pub mod interp;
pub mod ir;
pub mod kt;
pub mod lift;
pub mod pipeline;
pub mod simplify;
pub mod syntax;
pub mod term;
pub mod witness;

pub use diag::{DiagCode, Diagnostic, Diagnostics, Span};
pub use emit::{emit_json, emit_text, parse_json, Artifact, Style};
pub use encode::henry_ford;
pub use ir::{Classification, ConstructorDecl, DataDecl, Env, ShapeF, TypeExpr};
pub use pipeline::{derive, diagnose, Options, RuleSel};
pub use syntax::{parse_module, print_module, SourceModule};
