//! The differential suite: lifting evaluation against the leaf oracle over
//! every predicate-table assignment, and the all-true inhabitation check.

use std::fmt;

use super::{Interp, Pred, SemType};
use crate::diag::Diagnostic;
use crate::ir::{DataDecl, LIST};
use crate::lift::{lifting_for, LiftingDef};

/// Index instantiations exercised for a declaration of arity `n`: atom
/// carriers up to the model's size, booleans, and a few structured types
/// so that constructors with structured return indices are reached.
pub fn index_types(n: usize, it: &Interp<'_>) -> Vec<Vec<SemType>> {
    let bool_ = SemType::base("Bool", 2);
    let atoms = |name: &str, k| SemType::base(name, k);
    let mut singles: Vec<SemType> = (1..=it.model.atoms).map(|k| atoms("A", k)).collect();
    singles.push(bool_.clone());
    singles.push(SemType::prod(atoms("A", 2), atoms("A", 2)));
    singles.push(SemType::arrow(bool_.clone(), bool_.clone()));
    if it.env.get(LIST).is_some() {
        singles.push(SemType::Data(LIST.into(), vec![bool_.clone()]));
    }
    match n {
        0 => vec![vec![]],
        1 => singles.into_iter().map(|s| vec![s]).collect(),
        _ => {
            let mut out: Vec<Vec<SemType>> = Vec::new();
            for k in 1..=it.model.atoms {
                out.push(vec![atoms("A", k); n]);
            }
            let mut mixed: Vec<SemType> = (0..n)
                .map(|i| atoms(&((b'A' + i as u8) as char).to_string(), 1 + i % 2))
                .collect();
            out.push(mixed.clone());
            mixed[0] = bool_.clone();
            out.push(mixed);
            out.push(vec![bool_; n]);
            out
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub decl: String,
    pub instances: usize,
    pub values: usize,
    /// (value, table assignment) pairs compared.
    pub comparisons: usize,
    pub disagreements: Vec<String>,
    /// Values whose lifting fails at all-true tables.
    pub kt_failures: Vec<String>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty() && self.kt_failures.is_empty()
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} index instances, {} values, {} comparisons, {} disagreements, {} K_T failures",
            self.decl,
            self.instances,
            self.values,
            self.comparisons,
            self.disagreements.len(),
            self.kt_failures.len()
        )
    }
}

impl Interp<'_> {
    /// Compare `eval_lifting` with `leaf_oracle` on every value of every
    /// index instance, under every table assignment.
    pub fn sweep(&self, d: &DataDecl, instances: &[Vec<SemType>]) -> Result<SweepReport, Diagnostic> {
        self.sweep_lifting(d, &lifting_for(&d.name, self.env)?, instances)
    }

    /// As [`Interp::sweep`], with the lifting under test supplied.
    pub fn sweep_lifting(
        &self,
        d: &DataDecl,
        l: &LiftingDef,
        instances: &[Vec<SemType>],
    ) -> Result<SweepReport, Diagnostic> {
        let mut r = SweepReport {
            decl: d.name.clone(),
            ..Default::default()
        };
        for ts in instances {
            let vs = self.enumerate(&SemType::Data(d.name.clone(), ts.clone()), self.model.depth)?;
            r.instances += 1;
            r.values += vs.len();
            if vs.is_empty() {
                continue;
            }
            let mut assignments: Vec<Vec<Pred>> = vec![vec![]];
            for t in ts {
                let tables = self.tables(t)?;
                assignments = assignments
                    .into_iter()
                    .flat_map(|a| {
                        tables.iter().map(move |p| {
                            let mut a = a.clone();
                            a.push(p.clone());
                            a
                        })
                    })
                    .collect();
            }
            let all_true: Vec<Pred> = ts
                .iter()
                .map(|t| {
                    let vs = self.enumerate(t, self.model.depth)?;
                    Ok(Pred::Table(std::rc::Rc::new(
                        vs.iter().map(|v| (v.clone(), true)).collect(),
                    )))
                })
                .collect::<Result<_, Diagnostic>>()?;
            for v in vs.iter() {
                if !self.eval_lifting(l, ts, &all_true, v)? {
                    r.kt_failures.push(format!("{} at {}", v, show(ts)));
                }
                for ps in &assignments {
                    r.comparisons += 1;
                    let a = self.eval_lifting(l, ts, ps, v)?;
                    let b = self.leaf_oracle(d, ts, ps, v)?;
                    if a != b {
                        r.disagreements
                            .push(format!("{} at {}: lifting {a}, oracle {b}", v, show(ts)));
                    }
                }
            }
        }
        Ok(r)
    }
}

fn show(ts: &[SemType]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}
