//! Bundled example algebras with their expected classification.
//!
//! Each example is a text document under `resources/examples/`. Besides the
//! arrow table it may carry the printed `cap` table and expectation keys:
//!
//! ```text
//! member: IOML QW
//! nonmember: IMOD
//! witness: Imod x=a y=c z=e
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BuildError, Element, InvolutiveAlgebra};
use crate::classify::ClassId;
use crate::term::Assignment;
use crate::text::{parse_document, LoadError, TextError};

const SOURCES: [(&str, &str); 5] = [
    ("E4.14", include_str!("../resources/examples/E4.14.alg")),
    ("E4.22", include_str!("../resources/examples/E4.22.alg")),
    ("E5.15", include_str!("../resources/examples/E5.15.alg")),
    ("BOOL2", include_str!("../resources/examples/BOOL2.alg")),
    ("TRIV1", include_str!("../resources/examples/TRIV1.alg")),
];

/// Identifiers of the bundled examples.
pub fn example_ids() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(id, _)| *id)
}

/// The raw text of a bundled example.
pub fn example_source(id: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(k, _)| *k == id).map(|(_, s)| *s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedWitness {
    pub axiom: String,
    pub assignment: Assignment,
}

#[derive(Debug, Clone)]
pub struct NamedExample {
    pub id: String,
    pub description: String,
    pub algebra: InvolutiveAlgebra,
    /// The cap table as printed next to the arrow table, when there is one.
    pub printed_cap: Option<Vec<Vec<Element>>>,
    pub members: Vec<ClassId>,
    pub nonmembers: Vec<ClassId>,
    pub witnesses: Vec<ExpectedWitness>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown example `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("malformed witness line `{0}`")]
    Witness(String),
}

impl From<TextError> for CorpusError {
    fn from(e: TextError) -> Self {
        CorpusError::Load(LoadError::Text(e))
    }
}

fn classes(doc_value: Option<&str>) -> Result<Vec<ClassId>, CorpusError> {
    doc_value
        .unwrap_or("")
        .split_whitespace()
        .map(|c| ClassId::from_id(c).ok_or_else(|| CorpusError::UnknownClass(c.to_string())))
        .collect()
}

fn witness(line: &str, a: &InvolutiveAlgebra) -> Result<ExpectedWitness, CorpusError> {
    let bad = || CorpusError::Witness(line.to_string());
    let mut parts = line.split_whitespace();
    let axiom = parts.next().ok_or_else(bad)?.to_string();
    let mut pairs = Vec::new();
    for p in parts {
        let (v, x) = p.split_once('=').ok_or_else(bad)?;
        pairs.push((v.to_string(), a.index_of(x).ok_or_else(bad)?));
    }
    Ok(ExpectedWitness {
        axiom,
        assignment: Assignment(pairs),
    })
}

/// Parses an example document in the bundled format.
pub fn parse_example(id: &str, text: &str) -> Result<NamedExample, CorpusError> {
    let doc = parse_document(text)?;
    let algebra = doc
        .to_algebra()?
        .into_involutive()
        .map_err(BuildError::from)?;
    let printed_cap = if doc.has_block("cap") {
        Some(doc.binary_table("cap")?)
    } else {
        None
    };
    let description = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .map(|l| l.trim().to_string())
        .unwrap_or_default();
    let witnesses = doc
        .meta_all("witness")
        .map(|w| witness(w, &algebra))
        .collect::<Result<_, _>>()?;
    Ok(NamedExample {
        id: id.to_string(),
        description,
        printed_cap,
        members: classes(doc.meta("member"))?,
        nonmembers: classes(doc.meta("nonmember"))?,
        witnesses,
        algebra,
    })
}

pub fn load_example(id: &str) -> Result<NamedExample, CorpusError> {
    let text = example_source(id).ok_or_else(|| CorpusError::Unknown(id.to_string()))?;
    parse_example(id, text)
}

/// Every bundled example, in a fixed order.
pub fn load_all() -> Vec<NamedExample> {
    example_ids()
        .map(|id| load_example(id).expect("bundled examples are valid"))
        .collect()
}
