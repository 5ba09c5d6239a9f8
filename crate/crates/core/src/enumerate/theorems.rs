//! Implications and equivalences between axioms, checked model by model.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{enumerate_models, EnumerateError, EnumerationTask, DEFAULT_SIZE_CAP};
use crate::algebra::InvolutiveAlgebra;
use crate::axioms::{self, CheckError};
use crate::classify::{relations, ClassRelation, RelationKind};
use crate::corpus;

type Conj = &'static [&'static str];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    /// Where `under` holds, all sides hold or none does.
    Equivalent { under: Conj, sides: &'static [Conj] },
    /// Where `under` and `premise` hold, so does `conclusion`.
    Implies {
        under: Conj,
        premise: Conj,
        conclusion: Conj,
    },
    Relation(ClassRelation),
}

fn conj(c: Conj) -> String {
    c.join(" & ")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let under = |u: Conj| {
            if u.is_empty() {
                String::new()
            } else {
                format!("{} |- ", conj(u))
            }
        };
        match self {
            Statement::Equivalent { under: u, sides } => {
                let sides: Vec<String> = sides.iter().map(|s| conj(s)).collect();
                write!(f, "{}{}", under(u), sides.join(" <=> "))
            }
            Statement::Implies {
                under: u,
                premise,
                conclusion,
            } => write!(f, "{}{} => {}", under(u), conj(premise), conj(conclusion)),
            Statement::Relation(r) => f.write_str(&r.id()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem {
    pub id: String,
    pub description: String,
    pub statements: Vec<Statement>,
}

fn eqv(under: Conj, sides: &'static [Conj]) -> Statement {
    Statement::Equivalent { under, sides }
}

fn imp(under: Conj, premise: Conj, conclusion: Conj) -> Statement {
    Statement::Implies {
        under,
        premise,
        conclusion,
    }
}

fn th(id: &str, description: &str, statements: Vec<Statement>) -> Theorem {
    Theorem {
        id: id.to_string(),
        description: description.to_string(),
        statements,
    }
}

/// Every registered theorem: axiom-level results first, then one entry per
/// class relation (identified by the relation id).
pub fn theorems() -> Vec<Theorem> {
    let mut out = vec![
        th(
            "T4.12",
            "in implicative algebras QW1, QW2 and QW coincide",
            vec![eqv(&["Impl"], &[&["QW1"], &["QW2"], &["QW"]])],
        ),
        th(
            "T5.6",
            "under iG, QW1 and QW2 coincide",
            vec![eqv(&["iG"], &[&["QW1"], &["QW2"]])],
        ),
        th(
            "C5.7a",
            "under iG, QW1, QW2 and QW coincide",
            vec![eqv(&["iG"], &[&["QW1"], &["QW2"], &["QW"]])],
        ),
        th(
            "P3.5",
            "under QW1, Impl and Pimpl coincide",
            vec![eqv(&["QW1"], &[&["Impl"], &["Pimpl"]])],
        ),
        th("P3.6", "QW1 and iG give Impl", vec![imp(&[], &["QW1", "iG"], &["Impl"])]),
        th("P5.4", "QW2 and iG give Impl", vec![imp(&[], &["QW2", "iG"], &["Impl"])]),
        th("P5.11", "QW2 and Iabs-i give QW1", vec![imp(&[], &["QW2", "Iabs-i"], &["QW1"])]),
        th("T4.18", "Imod gives Impl and QW2", vec![imp(&[], &["Imod"], &["Impl", "QW2"])]),
        th(
            "T5.7",
            "orthomodular softlattices are exactly the orthomodular lattices",
            vec![eqv(&[], &[&["iG", "QW2"], &["Impl", "QW2"]])],
        ),
        th(
            "T5.12",
            "orthomodular widelattices are the QW algebras satisfying Iabs-i",
            vec![eqv(&[], &[&["QW2", "Iabs-i"], &["QW", "Iabs-i"]])],
        ),
        th(
            "C3.4",
            "Impl is iG plus Iabs-i, and also Pimpl plus Iabs-i",
            vec![eqv(&[], &[&["Impl"], &["iG", "Iabs-i"], &["Pimpl", "Iabs-i"]])],
        ),
        th(
            "L3.2",
            "Impl gives iG, Pimpl and Iabs-i",
            vec![imp(&[], &["Impl"], &["iG", "Pimpl", "Iabs-i"])],
        ),
        th(
            "L4.3",
            "three forms of the orthomodular condition",
            vec![eqv(&[], &[&["IOM"], &["IOM'"], &["IOM''"]])],
        ),
        th(
            "R4.16",
            "two forms of the modular condition",
            vec![eqv(&[], &[&["Imod"], &["Imod'"]])],
        ),
        th(
            "IOM-under-Impl",
            "in implicative algebras QW2 is the orthomodular condition",
            vec![eqv(&["Impl"], &[&["QW2"], &["IOM"]])],
        ),
        th("QW-split", "QW is QW1 plus QW2", vec![eqv(&[], &[&["QW"], &["QW1", "QW2"]])]),
        th("QW3-forms", "two forms of QW3", vec![eqv(&[], &[&["QW3"], &["QW3'"]])]),
    ];
    for r in relations() {
        let kind = match r.kind {
            RelationKind::Equality => "class equation",
            RelationKind::Inclusion => "class inclusion",
            RelationKind::StrictInclusion => "strict class inclusion",
        };
        out.push(th(&r.id(), kind, vec![Statement::Relation(r)]));
    }
    out
}

pub fn theorem(id: &str) -> Option<Theorem> {
    theorems().into_iter().find(|t| t.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub model: String,
    pub statement: String,
    /// Truth values of the parts involved, e.g. `QW1=true QW2=false`.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub description: String,
    pub statements: Vec<String>,
    pub models_examined: usize,
    /// Models where some hypothesis or side is true, so the check is not
    /// vacuous there.
    pub instances: usize,
    pub violations: Vec<Violation>,
    /// For strict inclusions: models separating the two classes.
    pub separating: Option<Vec<String>>,
    pub elapsed_ms: u64,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Truth<'a> {
    algebra: &'a InvolutiveAlgebra,
    cache: HashMap<&'static str, bool>,
}

impl<'a> Truth<'a> {
    fn new(algebra: &'a InvolutiveAlgebra) -> Self {
        Truth {
            algebra,
            cache: HashMap::new(),
        }
    }

    fn axiom(&mut self, id: &'static str) -> Result<bool, CheckError> {
        if let Some(&v) = self.cache.get(id) {
            return Ok(v);
        }
        let v = axioms::builtin().check(self.algebra, id)?.holds;
        self.cache.insert(id, v);
        Ok(v)
    }

    fn all(&mut self, c: Conj) -> Result<bool, CheckError> {
        for id in c {
            if !self.axiom(id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn class_side(&mut self, side: &[crate::classify::ClassId]) -> Result<bool, CheckError> {
        for c in side {
            if !self.all(c.axioms())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of one statement on one model: (instance, violated, detail).
fn evaluate(s: &Statement, t: &mut Truth) -> Result<(bool, bool, String), CheckError> {
    Ok(match s {
        Statement::Equivalent { under, sides } => {
            if !t.all(under)? {
                return Ok((false, false, String::new()));
            }
            let values: Vec<bool> = sides.iter().map(|c| t.all(c)).collect::<Result<_, _>>()?;
            let detail = sides
                .iter()
                .zip(&values)
                .map(|(c, v)| format!("{}={v}", conj(c)))
                .collect::<Vec<_>>()
                .join(" ");
            let any = values.iter().any(|&v| v);
            (any, values.iter().any(|&v| v != values[0]), detail)
        }
        Statement::Implies {
            under,
            premise,
            conclusion,
        } => {
            if !t.all(under)? || !t.all(premise)? {
                return Ok((false, false, String::new()));
            }
            let mut missing = Vec::new();
            for id in *conclusion {
                if !t.axiom(id)? {
                    missing.push(*id);
                }
            }
            let detail = format!("fails: {}", missing.join(", "));
            (true, !missing.is_empty(), detail)
        }
        Statement::Relation(r) => {
            let (l, rr) = (t.class_side(&r.lhs)?, t.class_side(&r.rhs)?);
            let violated = match r.kind {
                RelationKind::Equality => l != rr,
                RelationKind::Inclusion | RelationKind::StrictInclusion => l && !rr,
            };
            (l || rr, violated, format!("lhs={l} rhs={rr}"))
        }
    })
}

/// Checks a theorem on the given named models.
pub fn verify_on(models: &[(String, &InvolutiveAlgebra)], theorem: &Theorem) -> Result<TheoremReport, CheckError> {
    let start = Instant::now();
    let mut instances = 0;
    let mut violations = Vec::new();
    let mut separating: Option<Vec<String>> = None;
    for (name, a) in models {
        let mut truth = Truth::new(a);
        let mut instance = false;
        for s in &theorem.statements {
            let (inst, violated, detail) = evaluate(s, &mut truth)?;
            instance |= inst;
            if violated {
                violations.push(Violation {
                    model: name.clone(),
                    statement: s.to_string(),
                    detail,
                });
            }
            if let Statement::Relation(r) = s {
                if r.kind == RelationKind::StrictInclusion {
                    let sep = separating.get_or_insert_with(Vec::new);
                    if truth.class_side(&r.rhs)? && !truth.class_side(&r.lhs)? {
                        sep.push(name.clone());
                    }
                }
            }
        }
        instances += usize::from(instance);
    }
    Ok(TheoremReport {
        theorem: theorem.id.clone(),
        description: theorem.description.clone(),
        statements: theorem.statements.iter().map(ToString::to_string).collect(),
        models_examined: models.len(),
        instances,
        violations,
        separating,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyTask {
    /// Every size from 1 to `max_size` is enumerated up to isomorphism.
    pub max_size: usize,
    pub workers: usize,
    /// Also check the bundled examples.
    pub include_corpus: bool,
    pub size_cap: usize,
}

impl VerifyTask {
    pub fn new(max_size: usize) -> VerifyTask {
        VerifyTask {
            max_size,
            workers: 1,
            include_corpus: true,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }

    /// The named models a theorem is checked on.
    pub fn universe(&self) -> Result<Vec<(String, InvolutiveAlgebra)>, EnumerateError> {
        let mut out = Vec::new();
        if self.include_corpus {
            out.extend(corpus::load_all().into_iter().map(|e| (e.id, e.algebra)));
        }
        for size in 1..=self.max_size {
            let mut task = EnumerationTask::new(size).workers(self.workers);
            task.size_cap = self.size_cap;
            out.extend(
                enumerate_models(&task)?
                    .models
                    .into_iter()
                    .map(|m| (m.name, m.algebra)),
            );
        }
        Ok(out)
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown theorem `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

pub fn verify_metatheorem(task: &VerifyTask, id: &str) -> Result<TheoremReport, VerifyError> {
    let theorem = theorem(id).ok_or_else(|| VerifyError::Unknown(id.to_string()))?;
    let universe = task.universe()?;
    let named: Vec<(String, &InvolutiveAlgebra)> =
        universe.iter().map(|(n, a)| (n.clone(), a)).collect();
    Ok(verify_on(&named, &theorem)?)
}
