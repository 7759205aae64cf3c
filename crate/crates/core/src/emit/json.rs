//! JSON IR. Terms are nested `{"node": ...}` objects; bound variables are
//! de Bruijn indices (0 is the innermost binder) and binders keep their
//! names as hints. Keys are sorted and there are no floats, so equal
//! artifacts serialise to equal bytes.
//!
//! ```text
//! {"node":"pi","binder":"A","domain":{"node":"set"},"body":{"node":"var","index":0}}
//! ```

use serde_json::{json, Value};

use super::Artifact;
use crate::induct::{Hypothesis, RuleDef, RuleKind};
use crate::kt::KtWitness;
use crate::lift::{LiftClause, LiftingDef};
use crate::term::Term;
use crate::witness::{Postulate, WClause, WTerm, WitnessDef, WitnessKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonError(pub String);

impl std::fmt::Display for JsonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "malformed artifact JSON: {}", self.0)
    }
}

impl std::error::Error for JsonError {}

fn err<T>(msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError(msg.into()))
}

fn var_node(name: &str, ctx: &[String]) -> Value {
    match ctx.iter().rev().position(|n| n == name) {
        Some(i) => json!({"node": "var", "index": i}),
        None => json!({"node": "free", "name": name}),
    }
}

pub fn term(t: &Term, ctx: &mut Vec<String>) -> Value {
    match t {
        Term::Var(v) => var_node(v, ctx),
        Term::Set => json!({"node": "set"}),
        Term::Top => json!({"node": "top"}),
        Term::PredMap => json!({"node": "predmap"}),
        Term::Data(n) => json!({"node": "data", "name": n}),
        Term::Ctor(n) => json!({"node": "ctor", "name": n}),
        Term::Lift(n) => json!({"node": "lift", "name": n}),
        Term::Hyp(n) => json!({"node": "hyp", "name": n}),
        Term::KTop(c) => json!({"node": "ktop", "carrier": term(c, ctx)}),
        Term::Pi(n, d, b) | Term::Lam(n, d, b) | Term::Sig(n, d, b) => {
            let node = match t {
                Term::Pi(..) => "pi",
                Term::Lam(..) => "lam",
                _ => "sig",
            };
            let dom = term(d, ctx);
            ctx.push(n.clone());
            let body = term(b, ctx);
            ctx.pop();
            json!({"node": node, "binder": n, "domain": dom, "body": body})
        }
        Term::Arrow(a, b) | Term::Prod(a, b) | Term::Sum(a, b) => {
            let node = match t {
                Term::Arrow(..) => "arrow",
                Term::Prod(..) => "prod",
                _ => "sum",
            };
            json!({"node": node, "left": term(a, ctx), "right": term(b, ctx)})
        }
        Term::App(h, args) => {
            let args: Vec<Value> = args.iter().map(|a| term(a, ctx)).collect();
            if let Term::Var(_) = **h {
                json!({"node": "predapp", "pred": term(h, ctx), "args": args})
            } else {
                json!({"node": "app", "head": term(h, ctx), "args": args})
            }
        }
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, JsonError> {
    v.get(k).ok_or_else(|| JsonError(format!("missing field {k:?}")))
}

fn string(v: &Value, k: &str) -> Result<String, JsonError> {
    field(v, k)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| JsonError(format!("{k:?} is not a string")))
}

fn array<'a>(v: &'a Value, k: &str) -> Result<&'a Vec<Value>, JsonError> {
    field(v, k)?
        .as_array()
        .ok_or_else(|| JsonError(format!("{k:?} is not an array")))
}

fn strings(v: &Value, k: &str) -> Result<Vec<String>, JsonError> {
    array(v, k)?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| JsonError(format!("{k:?} holds a non-string")))
        })
        .collect()
}

fn lookup(v: &Value, ctx: &[String]) -> Result<String, JsonError> {
    let i = field(v, "index")?
        .as_u64()
        .ok_or_else(|| JsonError("index is not a natural number".into()))? as usize;
    if i >= ctx.len() {
        return err(format!("index {i} escapes its {} binders", ctx.len()));
    }
    Ok(ctx[ctx.len() - 1 - i].clone())
}

pub fn parse_term(v: &Value, ctx: &mut Vec<String>) -> Result<Term, JsonError> {
    let node = string(v, "node")?;
    let bin = |ctx: &mut Vec<String>| -> Result<(String, Term, Term), JsonError> {
        let n = string(v, "binder")?;
        let d = parse_term(field(v, "domain")?, ctx)?;
        ctx.push(n.clone());
        let b = parse_term(field(v, "body")?, ctx);
        ctx.pop();
        Ok((n, d, b?))
    };
    let two = |ctx: &mut Vec<String>| -> Result<(Box<Term>, Box<Term>), JsonError> {
        Ok((
            Box::new(parse_term(field(v, "left")?, ctx)?),
            Box::new(parse_term(field(v, "right")?, ctx)?),
        ))
    };
    Ok(match node.as_str() {
        "var" => Term::Var(lookup(v, ctx)?),
        "free" => Term::Var(string(v, "name")?),
        "set" => Term::Set,
        "top" => Term::Top,
        "predmap" => Term::PredMap,
        "data" => Term::Data(string(v, "name")?),
        "ctor" => Term::Ctor(string(v, "name")?),
        "lift" => Term::Lift(string(v, "name")?),
        "hyp" => Term::Hyp(string(v, "name")?),
        "ktop" => Term::KTop(Box::new(parse_term(field(v, "carrier")?, ctx)?)),
        "pi" => {
            let (n, d, b) = bin(ctx)?;
            Term::Pi(n, Box::new(d), Box::new(b))
        }
        "lam" => {
            let (n, d, b) = bin(ctx)?;
            Term::Lam(n, Box::new(d), Box::new(b))
        }
        "sig" => {
            let (n, d, b) = bin(ctx)?;
            Term::Sig(n, Box::new(d), Box::new(b))
        }
        "arrow" => {
            let (a, b) = two(ctx)?;
            Term::Arrow(a, b)
        }
        "prod" => {
            let (a, b) = two(ctx)?;
            Term::Prod(a, b)
        }
        "sum" => {
            let (a, b) = two(ctx)?;
            Term::Sum(a, b)
        }
        "app" | "predapp" => {
            let h = parse_term(field(v, if node == "app" { "head" } else { "pred" })?, ctx)?;
            let args = array(v, "args")?
                .iter()
                .map(|a| parse_term(a, ctx))
                .collect::<Result<Vec<_>, _>>()?;
            Term::App(Box::new(h), args)
        }
        other => return err(format!("unknown term node {other:?}")),
    })
}

/// Does the encoding mention any free variable?
pub fn is_closed(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.get("node").and_then(Value::as_str) != Some("free") && m.values().all(is_closed),
        Value::Array(xs) => xs.iter().all(is_closed),
        _ => true,
    }
}

fn pattern_locals(ps: &[WTerm]) -> Vec<String> {
    fn go(p: &WTerm, out: &mut Vec<String>) {
        match p {
            WTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            WTerm::Tuple(xs) => xs.iter().for_each(|x| go(x, out)),
            WTerm::App(h, xs) => {
                go(h, out);
                xs.iter().for_each(|x| go(x, out));
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    ps.iter().for_each(|p| go(p, &mut out));
    out
}

pub fn wterm(t: &WTerm, ctx: &mut Vec<String>) -> Value {
    let list = |xs: &[WTerm], ctx: &mut Vec<String>| -> Vec<Value> { xs.iter().map(|x| wterm(x, ctx)).collect() };
    match t {
        WTerm::Var(v) => var_node(v, ctx),
        WTerm::Ctor(n) => json!({"node": "ctor", "name": n}),
        WTerm::Global(n) => json!({"node": "global", "name": n}),
        WTerm::Postulate(n) => json!({"node": "postulate", "name": n}),
        WTerm::Type(ty) => json!({"node": "type", "term": term(ty, ctx)}),
        WTerm::TT => json!({"node": "tt"}),
        WTerm::Tuple(xs) => json!({"node": "tuple", "items": list(xs, ctx)}),
        WTerm::App(h, xs) => json!({"node": "app", "head": wterm(h, ctx), "args": list(xs, ctx)}),
        WTerm::Lam(vs, b) => {
            ctx.extend(vs.iter().cloned());
            let body = wterm(b, ctx);
            ctx.truncate(ctx.len() - vs.len());
            json!({"node": "lam", "binders": vs, "body": body})
        }
        WTerm::Case(s, arms) => {
            let scrut = wterm(s, ctx);
            let arms: Vec<Value> = arms
                .iter()
                .map(|(p, b)| {
                    let locals = pattern_locals(std::slice::from_ref(p));
                    ctx.extend(locals.iter().cloned());
                    let out = json!({"binders": locals, "pattern": wterm(p, ctx), "body": wterm(b, ctx)});
                    ctx.truncate(ctx.len() - locals.len());
                    out
                })
                .collect();
            json!({"node": "case", "scrutinee": scrut, "arms": arms})
        }
        WTerm::SelfCall {
            head,
            args,
            scrutinee,
            evidence,
        } => json!({
            "node": "selfcall",
            "head": head,
            "args": list(args, ctx),
            "scrutinee": scrutinee.as_ref().map(|s| wterm(s, ctx)),
            "evidence": evidence.as_ref().map(|s| wterm(s, ctx)),
        }),
        WTerm::MapCall {
            map,
            args,
            scrutinee,
            evidence,
        } => json!({
            "node": "mapcall",
            "map": map,
            "args": list(args, ctx),
            "scrutinee": wterm(scrutinee, ctx),
            "evidence": wterm(evidence, ctx),
        }),
        WTerm::HypCall(c, xs) => json!({"node": "hypcall", "hyp": var_node(c, ctx), "args": list(xs, ctx)}),
    }
}

fn var_name(v: &Value, ctx: &[String]) -> Result<String, JsonError> {
    match string(v, "node")?.as_str() {
        "var" => lookup(v, ctx),
        "free" => string(v, "name"),
        other => err(format!("expected a variable, found {other:?}")),
    }
}

pub fn parse_wterm(v: &Value, ctx: &mut Vec<String>) -> Result<WTerm, JsonError> {
    let list = |k: &str, ctx: &mut Vec<String>| -> Result<Vec<WTerm>, JsonError> {
        array(v, k)?.iter().map(|x| parse_wterm(x, ctx)).collect()
    };
    let opt = |k: &str, ctx: &mut Vec<String>| -> Result<Option<Box<WTerm>>, JsonError> {
        match field(v, k)? {
            Value::Null => Ok(None),
            x => Ok(Some(Box::new(parse_wterm(x, ctx)?))),
        }
    };
    Ok(match string(v, "node")?.as_str() {
        "var" => WTerm::Var(lookup(v, ctx)?),
        "free" => WTerm::Var(string(v, "name")?),
        "ctor" => WTerm::Ctor(string(v, "name")?),
        "global" => WTerm::Global(string(v, "name")?),
        "postulate" => WTerm::Postulate(string(v, "name")?),
        "type" => WTerm::Type(parse_term(field(v, "term")?, ctx)?),
        "tt" => WTerm::TT,
        "tuple" => WTerm::Tuple(list("items", ctx)?),
        "app" => WTerm::App(Box::new(parse_wterm(field(v, "head")?, ctx)?), list("args", ctx)?),
        "lam" => {
            let vs = strings(v, "binders")?;
            ctx.extend(vs.iter().cloned());
            let b = parse_wterm(field(v, "body")?, ctx);
            ctx.truncate(ctx.len() - vs.len());
            WTerm::Lam(vs, Box::new(b?))
        }
        "case" => {
            let s = parse_wterm(field(v, "scrutinee")?, ctx)?;
            let mut arms = Vec::new();
            for a in array(v, "arms")? {
                let locals = strings(a, "binders")?;
                ctx.extend(locals.iter().cloned());
                let arm = (|| {
                    Ok((
                        parse_wterm(field(a, "pattern")?, ctx)?,
                        parse_wterm(field(a, "body")?, ctx)?,
                    ))
                })();
                ctx.truncate(ctx.len() - locals.len());
                arms.push(arm?);
            }
            WTerm::Case(Box::new(s), arms)
        }
        "selfcall" => WTerm::SelfCall {
            head: string(v, "head")?,
            args: list("args", ctx)?,
            scrutinee: opt("scrutinee", ctx)?,
            evidence: opt("evidence", ctx)?,
        },
        "mapcall" => WTerm::MapCall {
            map: string(v, "map")?,
            args: list("args", ctx)?,
            scrutinee: Box::new(parse_wterm(field(v, "scrutinee")?, ctx)?),
            evidence: Box::new(parse_wterm(field(v, "evidence")?, ctx)?),
        },
        "hypcall" => WTerm::HypCall(var_name(field(v, "hyp")?, ctx)?, list("args", ctx)?),
        other => return err(format!("unknown witness node {other:?}")),
    })
}

fn lift_clause(c: &LiftClause) -> Value {
    let mut ctx = Vec::new();
    let binders: Vec<Value> = c
        .binders
        .iter()
        .map(|(n, t)| {
            let ty = term(t, &mut ctx);
            ctx.push(n.clone());
            json!({"name": n, "type": ty})
        })
        .collect();
    json!({
        "ctor": c.ctor,
        "binders": binders,
        "params": c.params.iter().map(|p| term(p, &mut ctx)).collect::<Vec<_>>(),
        "pattern": term(&c.pattern, &mut ctx),
        "body": term(&c.body, &mut ctx),
    })
}

fn parse_lift_clause(v: &Value) -> Result<LiftClause, JsonError> {
    let mut ctx = Vec::new();
    let mut binders = Vec::new();
    for b in array(v, "binders")? {
        let n = string(b, "name")?;
        let t = parse_term(field(b, "type")?, &mut ctx)?;
        ctx.push(n.clone());
        binders.push((n, t));
    }
    Ok(LiftClause {
        ctor: string(v, "ctor")?,
        params: array(v, "params")?
            .iter()
            .map(|p| parse_term(p, &mut ctx))
            .collect::<Result<_, _>>()?,
        pattern: parse_term(field(v, "pattern")?, &mut ctx)?,
        binders,
        body: parse_term(field(v, "body")?, &mut ctx)?,
    })
}

fn wclause(c: &WClause) -> Value {
    let mut ctx = pattern_locals(&c.lhs);
    let locals = ctx.clone();
    json!({
        "ctor": c.ctor,
        "locals": locals,
        "lhs": c.lhs.iter().map(|p| wterm(p, &mut ctx)).collect::<Vec<_>>(),
        "rhs": wterm(&c.rhs, &mut ctx),
    })
}

fn parse_wclause(v: &Value) -> Result<WClause, JsonError> {
    let mut ctx = strings(v, "locals")?;
    Ok(WClause {
        ctor: string(v, "ctor")?,
        lhs: array(v, "lhs")?
            .iter()
            .map(|p| parse_wterm(p, &mut ctx))
            .collect::<Result<_, _>>()?,
        rhs: parse_wterm(field(v, "rhs")?, &mut ctx)?,
    })
}

fn closed(t: &Term) -> Value {
    term(t, &mut Vec::new())
}

fn parse_closed(v: &Value, k: &str) -> Result<Term, JsonError> {
    parse_term(field(v, k)?, &mut Vec::new())
}

pub fn to_value(a: &Artifact) -> Value {
    match a {
        Artifact::Lifting(l) => json!({
            "kind": "lifting",
            "name": l.name,
            "head": closed(&l.head),
            "term": closed(&l.signature),
            "clauses": l.clauses.iter().map(lift_clause).collect::<Vec<_>>(),
        }),
        Artifact::Rule(r) => json!({
            "kind": "rule",
            "rule": r.kind.as_str(),
            "name": r.name,
            "decl": r.decl,
            "term": closed(&r.statement),
            "hypotheses": r.hypotheses.iter().map(|h| json!({
                "name": h.name,
                "ctor": h.ctor,
                "term": closed(&h.term),
            })).collect::<Vec<_>>(),
        }),
        Artifact::Witness(w) => json!({
            "kind": w.kind.as_str(),
            "name": w.name,
            "decl": w.decl,
            "term": closed(&w.signature),
            "clauses": w.clauses.iter().map(wclause).collect::<Vec<_>>(),
        }),
        Artifact::Postulate(p) | Artifact::Auxiliary(p) => json!({
            "kind": if matches!(a, Artifact::Postulate(_)) { "postulate" } else { "auxiliary" },
            "name": p.name,
            "term": closed(&p.signature),
        }),
    }
}

pub fn from_value(v: &Value) -> Result<Artifact, JsonError> {
    let kind = string(v, "kind")?;
    Ok(match kind.as_str() {
        "lifting" => Artifact::Lifting(LiftingDef {
            name: string(v, "name")?,
            head: parse_closed(v, "head")?,
            signature: parse_closed(v, "term")?,
            clauses: array(v, "clauses")?
                .iter()
                .map(parse_lift_clause)
                .collect::<Result<_, _>>()?,
        }),
        "rule" => Artifact::Rule(RuleDef {
            name: string(v, "name")?,
            decl: string(v, "decl")?,
            kind: match string(v, "rule")?.as_str() {
                "deep" => RuleKind::Deep,
                "structural" => RuleKind::Structural,
                other => return err(format!("unknown rule kind {other:?}")),
            },
            hypotheses: array(v, "hypotheses")?
                .iter()
                .map(|h| {
                    Ok(Hypothesis {
                        name: string(h, "name")?,
                        ctor: string(h, "ctor")?,
                        term: parse_closed(h, "term")?,
                    })
                })
                .collect::<Result<_, JsonError>>()?,
            statement: parse_closed(v, "term")?,
        }),
        "witness" | "liftmap" | "kt" => Artifact::Witness(WitnessDef {
            name: string(v, "name")?,
            decl: string(v, "decl")?,
            kind: match kind.as_str() {
                "witness" => WitnessKind::Soundness,
                "liftmap" => WitnessKind::LiftMap,
                _ => WitnessKind::Kt,
            },
            signature: parse_closed(v, "term")?,
            clauses: array(v, "clauses")?
                .iter()
                .map(parse_wclause)
                .collect::<Result<_, _>>()?,
        }),
        "postulate" | "auxiliary" => {
            let p = Postulate {
                name: string(v, "name")?,
                signature: parse_closed(v, "term")?,
            };
            if kind == "postulate" {
                Artifact::Postulate(p)
            } else {
                Artifact::Auxiliary(p)
            }
        }
        other => return err(format!("unknown artifact kind {other:?}")),
    })
}

pub fn emit_json(a: &Artifact) -> String {
    serde_json::to_string(&to_value(a)).expect("JSON values serialise")
}

pub fn parse_json(s: &str) -> Result<Artifact, JsonError> {
    let v: Value = serde_json::from_str(s).map_err(|e| JsonError(e.to_string()))?;
    from_value(&v)
}

/// A list of artifacts as one JSON array.
pub fn emit_json_all(xs: &[Artifact]) -> String {
    let vs: Vec<Value> = xs.iter().map(to_value).collect();
    serde_json::to_string_pretty(&Value::Array(vs)).expect("JSON values serialise")
}

/// Every artifact of a K_T witness, skeleton first.
pub fn kt_artifacts(k: &KtWitness) -> Vec<Artifact> {
    let mut out = vec![Artifact::Witness(k.def.clone())];
    out.extend(k.postulates.iter().cloned().map(Artifact::Postulate));
    out.extend(k.auxiliary.iter().cloned().map(Artifact::Auxiliary));
    out
}
