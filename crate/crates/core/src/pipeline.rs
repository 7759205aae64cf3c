//! Per-declaration orchestration shared by the command line and the tests.

use crate::diag::{Diagnostic, Diagnostics};
use crate::emit::Artifact;
use crate::induct::{derive_deep_rule, derive_structural_rule};
use crate::ir::{check_decl, Classification, DataDecl, Env};
use crate::kt::derive_kt_witness;
use crate::lift::{derive_data_lifting, prepare, truly_nested_gadt};
use crate::witness::{derive_lift_map, has_map, synth_witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RuleSel {
    Deep,
    Structural,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Options {
    pub rules: RuleSel,
    /// Soundness witness, plus the lifting map when the type has one.
    pub witness: bool,
    /// The `K_T` skeleton with its postulates.
    pub kt: bool,
}

/// Everything wrong with `d`, grammar first; empty when derivation can proceed.
pub fn diagnose(d: &DataDecl, env: &Env) -> Diagnostics {
    // the grammar check would only report the self-nesting occurrence
    if d.classification == Classification::TrulyNestedGadt {
        return vec![truly_nested_gadt(d)];
    }
    let mut ds = check_decl(d, env);
    // the primitive equality type is not encoded
    if ds.is_empty() && !d.is_equal() {
        if let Err(e) = prepare(d, env) {
            ds.push(e);
        }
    }
    ds
}

/// All artifacts for `d`, or every diagnostic that prevents them.
pub fn derive(d: &DataDecl, env: &Env, opts: Options) -> Result<Vec<Artifact>, Diagnostics> {
    let ds = diagnose(d, env);
    if !ds.is_empty() {
        return Err(ds);
    }
    let one = |e: Diagnostic| vec![e];
    let mut out = vec![Artifact::Lifting(derive_data_lifting(d, env).map_err(one)?)];
    if opts.rules != RuleSel::Structural {
        out.push(Artifact::Rule(derive_deep_rule(d, env).map_err(one)?));
    }
    if opts.rules != RuleSel::Deep {
        out.push(Artifact::Rule(derive_structural_rule(d, env).map_err(one)?));
    }
    if opts.witness {
        if has_map(&d.name, env) {
            out.push(Artifact::Witness(derive_lift_map(d, env).map_err(one)?));
        }
        out.push(Artifact::Witness(synth_witness(d, env).map_err(one)?));
    }
    if opts.kt {
        out.extend(crate::emit::json::kt_artifacts(
            &derive_kt_witness(d, env).map_err(one)?,
        ));
    }
    Ok(out)
}
