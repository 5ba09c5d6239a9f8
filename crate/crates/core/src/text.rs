//! Line-oriented text format for finite algebras.
//!
//! ```text
//! # anything after '#' is a comment
//! name: bool2            (optional)
//! elements: 0 1
//! one: 1
//! zero: 0
//! arrow:
//! 1 1
//! 0 1
//! ```
//!
//! A line `key: value` sets a scalar; a line `key:` with nothing after the
//! colon opens a block whose rows follow, one row per line, as
//! whitespace-separated element names. Row `i` of a binary table holds the
//! results with element `i` as left operand. Unary tables (`star:`,
//! `complement:`) may be written inline or as a one-row block. Several
//! documents can be concatenated with a line consisting of `---`.
//!
//! Which blocks are present decides the signature: `arrow` for BE algebras,
//! `odot` + `star` for product algebras, `meet` + `join` + `complement` for
//! lattices. Unrecognised scalar keys are kept as metadata.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Anything that can go wrong turning text into a validated algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<StructureError> for LoadError {
    fn from(e: StructureError) -> Self {
        LoadError::Text(TextError::Structure(e))
    }
}

/// One parsed document, before any algebraic validation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub elements: Vec<String>,
    pub one: Option<String>,
    pub zero: Option<String>,
    /// Blocks in file order: `(key, rows)`.
    pub blocks: Vec<(String, Vec<Vec<String>>)>,
    /// Scalar keys other than `elements`, `one`, `zero`, in file order.
    pub metadata: Vec<(String, String)>,
}

impl Document {
    pub fn block(&self, key: &str) -> Option<&[Vec<String>]> {
        self.blocks
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, rows)| rows.as_slice())
    }

    pub fn has_block(&self, key: &str) -> bool {
        self.block(key).is_some()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn meta_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.metadata
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn name(&self) -> Option<&str> {
        self.meta("name")
    }

    pub fn index_of(&self, name: &str) -> Result<Element, StructureError> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| StructureError::UnknownName(name.to_string()))
    }

    pub fn constant(&self, which: &'static str) -> Result<Element, TextError> {
        let name = match which {
            "one" => self.one.as_deref(),
            _ => self.zero.as_deref(),
        }
        .ok_or(TextError::Missing(which))?;
        Ok(self.index_of(name)?)
    }

    /// A square table resolved to indices.
    pub fn binary_table(&self, key: &'static str) -> Result<Vec<Vec<Element>>, TextError> {
        let rows = self.block(key).ok_or(TextError::Missing(key))?;
        let n = self.elements.len();
        if rows.len() != n {
            return Err(StructureError::RowCount {
                expected: n,
                found: rows.len(),
            }
            .into());
        }
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != n {
                    return Err(StructureError::RowLength {
                        row: i,
                        expected: n,
                        found: row.len(),
                    }
                    .into());
                }
                row.iter()
                    .map(|cell| self.index_of(cell).map_err(TextError::from))
                    .collect()
            })
            .collect()
    }

    /// A unary table, written inline (`star: 1 0`) or as a one-row block.
    pub fn unary_table(&self, key: &'static str) -> Result<Vec<Element>, TextError> {
        let row: Vec<String> = match (self.block(key), self.meta(key)) {
            (Some(rows), _) => {
                if rows.len() != 1 {
                    return Err(StructureError::RowCount {
                        expected: 1,
                        found: rows.len(),
                    }
                    .into());
                }
                rows[0].clone()
            }
            (None, Some(inline)) => inline.split_whitespace().map(str::to_string).collect(),
            (None, None) => return Err(TextError::Missing(key)),
        };
        if row.len() != self.elements.len() {
            return Err(StructureError::RowLength {
                row: 0,
                expected: self.elements.len(),
                found: row.len(),
            }
            .into());
        }
        row.iter()
            .map(|cell| self.index_of(cell).map_err(TextError::from))
            .collect()
    }

    /// Validates the document as a bounded BE algebra.
    pub fn to_algebra(&self) -> Result<Algebra, LoadError> {
        let rows = self.binary_table("arrow")?;
        let one = self.constant("one")?;
        let zero = self.constant("zero")?;
        Ok(Algebra::new(&rows, one, zero, Some(self.elements.clone()))?)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> TextError {
    TextError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses one or more `---`-separated documents.
pub fn parse_documents(text: &str) -> Result<Vec<Document>, TextError> {
    let mut docs = Vec::new();
    let mut current: Option<Document> = None;
    let mut open_block: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "---" {
            if let Some(doc) = current.take() {
                docs.push(finish(doc, line_no)?);
            }
            open_block = None;
            continue;
        }
        let doc = current.get_or_insert_with(Document::default);
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(syntax(line_no, format!("malformed key `{key}`")));
            }
            open_block = None;
            if value.is_empty() {
                if doc.has_block(key) {
                    return Err(syntax(line_no, format!("duplicate block `{key}`")));
                }
                doc.blocks.push((key.to_string(), Vec::new()));
                open_block = Some(doc.blocks.len() - 1);
                continue;
            }
            match key {
                "elements" => {
                    if !doc.elements.is_empty() {
                        return Err(syntax(line_no, "duplicate `elements`"));
                    }
                    doc.elements = value.split_whitespace().map(str::to_string).collect();
                }
                "one" | "zero" => {
                    if value.split_whitespace().count() != 1 {
                        return Err(syntax(line_no, format!("`{key}` takes a single name")));
                    }
                    let slot = if key == "one" { &mut doc.one } else { &mut doc.zero };
                    if slot.is_some() {
                        return Err(syntax(line_no, format!("duplicate `{key}`")));
                    }
                    *slot = Some(value.to_string());
                }
                _ => doc.metadata.push((key.to_string(), value.to_string())),
            }
        } else {
            let Some(block) = open_block else {
                return Err(syntax(line_no, "table row outside of a block"));
            };
            doc.blocks[block]
                .1
                .push(line.split_whitespace().map(str::to_string).collect());
        }
    }
    if let Some(doc) = current.take() {
        docs.push(finish(doc, text.lines().count())?);
    }
    Ok(docs)
}

fn finish(doc: Document, line: usize) -> Result<Document, TextError> {
    if doc.elements.is_empty() {
        return Err(syntax(line, "document has no `elements`"));
    }
    for (i, e) in doc.elements.iter().enumerate() {
        if doc.elements[..i].contains(e) {
            return Err(StructureError::DuplicateName(e.clone()).into());
        }
    }
    Ok(doc)
}

/// Parses exactly one document.
pub fn parse_document(text: &str) -> Result<Document, TextError> {
    let mut docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.pop().unwrap()),
        0 => Err(syntax(1, "empty input")),
        n => Err(syntax(1, format!("expected one algebra, found {n}"))),
    }
}

/// Reads a BE algebra from text.
pub fn parse_algebra(text: &str) -> Result<Algebra, LoadError> {
    parse_document(text)?.to_algebra()
}

pub(crate) fn write_header(
    out: &mut String,
    name: Option<&str>,
    names: &[String],
    one: Element,
    zero: Element,
) {
    if let Some(name) = name {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(out, "elements: {}", names.join(" "));
    let _ = writeln!(out, "one: {}", names[one]);
    let _ = writeln!(out, "zero: {}", names[zero]);
}

pub(crate) fn write_table(out: &mut String, key: &str, names: &[String], cell: impl Fn(usize, usize) -> Element) {
    let n = names.len();
    let width = names.iter().map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "{key}:");
    for x in 0..n {
        let row: Vec<String> = (0..n).map(|y| format!("{:<width$}", names[cell(x, y)])).collect();
        let _ = writeln!(out, "{}", row.join(" ").trim_end());
    }
}

pub(crate) fn write_unary(out: &mut String, key: &str, names: &[String], table: &[Element]) {
    let row: Vec<&str> = table.iter().map(|&x| names[x].as_str()).collect();
    let _ = writeln!(out, "{key}: {}", row.join(" "));
}

/// Renders a BE algebra in the text format.
pub fn write_algebra(a: &Algebra, name: Option<&str>) -> String {
    let mut out = String::new();
    write_header(&mut out, name, a.names(), a.one(), a.zero());
    write_table(&mut out, "arrow", a.names(), |x, y| a.arrow(x, y));
    out
}
