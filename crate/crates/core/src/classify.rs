//! Class membership and the relations between classes.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::InvolutiveAlgebra;
use crate::axioms::{self, CheckError};
use crate::term::CheckResult;

/// Every class is a conjunction of catalog axioms over involutive BE
/// algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassId {
    #[serde(rename = "InvBE")]
    InvBe,
    #[serde(rename = "IOM-alg")]
    IomAlg,
    #[serde(rename = "preW")]
    PreW,
    #[serde(rename = "metaW")]
    MetaW,
    #[serde(rename = "QW")]
    Qw,
    #[serde(rename = "IOL")]
    Iol,
    #[serde(rename = "IOSL")]
    Iosl,
    #[serde(rename = "IOWL")]
    Iowl,
    #[serde(rename = "IOML")]
    Ioml,
    #[serde(rename = "IMOD")]
    Imod,
    #[serde(rename = "IOMSL")]
    Iomsl,
    #[serde(rename = "IOMWL")]
    Iomwl,
}

impl ClassId {
    pub const ALL: [ClassId; 12] = [
        ClassId::InvBe,
        ClassId::IomAlg,
        ClassId::PreW,
        ClassId::MetaW,
        ClassId::Qw,
        ClassId::Iol,
        ClassId::Iosl,
        ClassId::Iowl,
        ClassId::Ioml,
        ClassId::Imod,
        ClassId::Iomsl,
        ClassId::Iomwl,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClassId::InvBe => "InvBE",
            ClassId::IomAlg => "IOM-alg",
            ClassId::PreW => "preW",
            ClassId::MetaW => "metaW",
            ClassId::Qw => "QW",
            ClassId::Iol => "IOL",
            ClassId::Iosl => "IOSL",
            ClassId::Iowl => "IOWL",
            ClassId::Ioml => "IOML",
            ClassId::Imod => "IMOD",
            ClassId::Iomsl => "IOMSL",
            ClassId::Iomwl => "IOMWL",
        }
    }

    pub fn from_id(s: &str) -> Option<ClassId> {
        ClassId::ALL.into_iter().find(|c| c.id() == s)
    }

    /// The defining axioms, on top of the involutive BE axioms.
    pub fn axioms(self) -> &'static [&'static str] {
        match self {
            ClassId::InvBe => &[],
            ClassId::IomAlg => &["QW2"],
            ClassId::PreW => &["QW1"],
            ClassId::MetaW => &["QW3"],
            ClassId::Qw => &["QW"],
            ClassId::Iol => &["Impl"],
            ClassId::Iosl => &["iG"],
            ClassId::Iowl => &["Iabs-i"],
            ClassId::Ioml => &["Impl", "QW2"],
            ClassId::Imod => &["Imod"],
            ClassId::Iomsl => &["QW2", "iG"],
            ClassId::Iomwl => &["QW2", "Iabs-i"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassId::InvBe => "involutive BE algebras",
            ClassId::IomAlg => "implicative-orthomodular algebras",
            ClassId::PreW => "pre-Wajsberg algebras",
            ClassId::MetaW => "meta-Wajsberg algebras",
            ClassId::Qw => "quantum-Wajsberg algebras",
            ClassId::Iol => "implicative-ortholattices",
            ClassId::Iosl => "implicative-orthosoftlattices",
            ClassId::Iowl => "implicative-orthowidelattices",
            ClassId::Ioml => "implicative-orthomodular lattices",
            ClassId::Imod => "implicative-modular algebras",
            ClassId::Iomsl => "implicative-orthomodular softlattices",
            ClassId::Iomwl => "implicative-orthomodular widelattices",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Axioms checked by [`classify`], in report order. `QW1` is not needed by
/// any definition but guards the encoding of `QW`.
pub const CLASS_AXIOMS: [&str; 8] = ["QW", "QW1", "QW2", "QW3", "Impl", "iG", "Iabs-i", "Imod"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class: ClassId,
    pub member: bool,
    /// Every defining axiom that fails, with its witness.
    pub failing: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub algebra: String,
    pub axioms: Vec<CheckResult>,
    pub verdicts: Vec<ClassVerdict>,
    pub elapsed_us: u64,
}

impl ClassificationReport {
    pub fn verdict(&self, class: ClassId) -> &ClassVerdict {
        self.verdicts
            .iter()
            .find(|v| v.class == class)
            .expect("a verdict for every class")
    }

    pub fn member(&self, class: ClassId) -> bool {
        self.verdict(class).member
    }

    pub fn axiom(&self, id: &str) -> Option<&CheckResult> {
        self.axioms.iter().find(|r| r.axiom.as_deref() == Some(id))
    }

    pub fn members(&self) -> Vec<ClassId> {
        self.verdicts.iter().filter(|v| v.member).map(|v| v.class).collect()
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("internal error: QW gives {qw} but QW1 and QW2 give {split}")]
    QwMismatch { qw: bool, split: bool },
    #[error("no result for axiom `{0}`")]
    MissingAxiom(String),
}

/// Recomputes every verdict from raw axiom results.
pub fn verdicts_from_axioms(results: &[CheckResult]) -> Result<Vec<ClassVerdict>, ClassifyError> {
    let find = |id: &str| {
        results
            .iter()
            .find(|r| r.axiom.as_deref() == Some(id))
            .ok_or_else(|| ClassifyError::MissingAxiom(id.to_string()))
    };
    let (qw, qw1, qw2) = (find("QW")?.holds, find("QW1")?.holds, find("QW2")?.holds);
    if qw != (qw1 && qw2) {
        return Err(ClassifyError::QwMismatch {
            qw,
            split: qw1 && qw2,
        });
    }
    ClassId::ALL
        .into_iter()
        .map(|class| {
            let mut failing = Vec::new();
            for id in class.axioms() {
                let r = find(id)?;
                if !r.holds {
                    failing.push(r.clone());
                }
            }
            Ok(ClassVerdict {
                class,
                member: failing.is_empty(),
                failing,
            })
        })
        .collect()
}

pub fn classify(a: &InvolutiveAlgebra, name: &str) -> Result<ClassificationReport, ClassifyError> {
    let start = Instant::now();
    let axioms = axioms::builtin().check_all(a, &CLASS_AXIOMS)?;
    let verdicts = verdicts_from_axioms(&axioms)?;
    Ok(ClassificationReport {
        algebra: name.to_string(),
        axioms,
        verdicts,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Equality,
    Inclusion,
    StrictInclusion,
}

/// `lhs = rhs` or `lhs ⊆ rhs`, each side an intersection of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRelation {
    pub kind: RelationKind,
    pub lhs: Vec<ClassId>,
    pub rhs: Vec<ClassId>,
}

fn side(classes: &[ClassId]) -> String {
    classes.iter().map(|c| c.id()).collect::<Vec<_>>().join("&")
}

impl ClassRelation {
    fn new(kind: RelationKind, lhs: &[ClassId], rhs: &[ClassId]) -> ClassRelation {
        ClassRelation {
            kind,
            lhs: lhs.to_vec(),
            rhs: rhs.to_vec(),
        }
    }

    /// `IOML=QW&IOL`, `IMOD<IOML`.
    pub fn id(&self) -> String {
        let op = match self.kind {
            RelationKind::Equality => "=",
            RelationKind::Inclusion | RelationKind::StrictInclusion => "<",
        };
        format!("{}{op}{}", side(&self.lhs), side(&self.rhs))
    }

    pub fn lhs_holds(&self, r: &ClassificationReport) -> bool {
        self.lhs.iter().all(|c| r.member(*c))
    }

    pub fn rhs_holds(&self, r: &ClassificationReport) -> bool {
        self.rhs.iter().all(|c| r.member(*c))
    }

    pub fn violated_by(&self, r: &ClassificationReport) -> bool {
        let (l, rr) = (self.lhs_holds(r), self.rhs_holds(r));
        match self.kind {
            RelationKind::Equality => l != rr,
            RelationKind::Inclusion | RelationKind::StrictInclusion => l && !rr,
        }
    }
}

/// The registered relations between classes.
pub fn relations() -> Vec<ClassRelation> {
    use ClassId::*;
    use RelationKind::*;
    vec![
        ClassRelation::new(Equality, &[Qw], &[PreW, IomAlg]),
        ClassRelation::new(Equality, &[Qw], &[MetaW, IomAlg]),
        ClassRelation::new(StrictInclusion, &[PreW], &[MetaW]),
        ClassRelation::new(Equality, &[Iol], &[Iosl, Iowl]),
        ClassRelation::new(Equality, &[Ioml], &[IomAlg, Iol]),
        ClassRelation::new(Equality, &[Ioml], &[PreW, Iol]),
        ClassRelation::new(Equality, &[Ioml], &[Qw, Iol]),
        ClassRelation::new(StrictInclusion, &[Ioml], &[MetaW]),
        ClassRelation::new(StrictInclusion, &[Imod], &[Ioml]),
        ClassRelation::new(Equality, &[Iomsl], &[PreW, Iosl]),
        ClassRelation::new(Equality, &[Iomsl], &[Qw, Iosl]),
        ClassRelation::new(Equality, &[Iomsl], &[Ioml]),
        ClassRelation::new(Equality, &[Iomwl], &[Qw, Iowl]),
        ClassRelation::new(StrictInclusion, &[Iomwl], &[MetaW]),
    ]
}

pub fn relation(id: &str) -> Option<ClassRelation> {
    relations().into_iter().find(|r| r.id() == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub kind: RelationKind,
    pub examined: usize,
    /// Names of corpus members contradicting the relation.
    pub violations: Vec<String>,
    /// For strict inclusions: members of the larger class outside the
    /// smaller one.
    pub separating: Option<Vec<String>>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_class_relation(
    corpus: &[ClassificationReport],
    rel: &ClassRelation,
) -> RelationReport {
    let violations = corpus
        .iter()
        .filter(|r| rel.violated_by(r))
        .map(|r| r.algebra.clone())
        .collect();
    let separating = (rel.kind == RelationKind::StrictInclusion).then(|| {
        corpus
            .iter()
            .filter(|r| rel.rhs_holds(r) && !rel.lhs_holds(r))
            .map(|r| r.algebra.clone())
            .collect()
    });
    RelationReport {
        relation: rel.id(),
        kind: rel.kind,
        examined: corpus.len(),
        violations,
        separating,
    }
}
