//! The report every command produces, and its two renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    /// The command line, argv joined by spaces.
    pub command: String,
    pub tool_version: String,
    pub inputs: Vec<Input>,
    pub results: Vec<Record>,
    pub timing: Timing,
    /// 0: every check passed, 1: some check failed, 2: usage or input error.
    pub exit_status: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Input {
    Example { id: String },
    File { path: String },
    Generated { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub var: String,
    pub element: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingAxiom {
    pub axiom: String,
    pub witness: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub name: String,
    pub canonical: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub model: String,
    pub statement: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Record {
    /// A catalog axiom, an inline formula or a suite item.
    Check {
        id: String,
        formula: String,
        holds: bool,
        /// Empty when the formula holds.
        witness: Vec<Binding>,
        evaluations: u64,
    },
    /// A suite whose hypotheses fail; its items were not checked.
    Skipped { id: String, reason: String },
    Class {
        class: String,
        name: String,
        member: bool,
        failing: Vec<FailingAxiom>,
    },
    Table {
        op: String,
        elements: Vec<String>,
        /// One row per element; unary tables have a single row.
        rows: Vec<Vec<String>>,
    },
    Transform {
        from: String,
        to: String,
        /// Where the translated algebra was written, if not inline.
        output: Option<String>,
        text: Option<String>,
    },
    Enumeration {
        size: usize,
        modulo_iso: bool,
        workers: usize,
        models: usize,
        unfiltered: usize,
        nodes: u64,
        output: Option<String>,
        listing: Vec<ModelEntry>,
    },
    Theorem {
        id: String,
        description: String,
        statements: Vec<String>,
        models_examined: usize,
        instances: usize,
        violations: Vec<ViolationEntry>,
        separating: Option<Vec<String>>,
    },
    Listing { what: String, entries: Vec<Vec<String>> },
}

impl Record {
    /// Whether this record counts as a failed check.
    pub fn failed(&self) -> bool {
        match self {
            Record::Check { holds, .. } => !holds,
            Record::Theorem { violations, .. } => !violations.is_empty(),
            _ => false,
        }
    }
}

fn bindings(w: &[Binding]) -> String {
    w.iter()
        .map(|b| format!("{}={}", b.var, b.element))
        .collect::<Vec<_>>()
        .join(", ")
}

fn grid(out: &mut String, header: &[String], rows: &[Vec<String>], labels: Option<&[String]>) {
    let width = header
        .iter()
        .chain(rows.iter().flatten())
        .chain(labels.into_iter().flatten())
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let pad = |s: &str| format!("{s:>width$}");
    let lead = if labels.is_some() { format!("{} |", pad("")) } else { String::new() };
    let head: Vec<String> = header.iter().map(|h| pad(h)).collect();
    let _ = writeln!(out, "  {lead} {}", head.join(" "));
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| pad(c)).collect();
        let lead = labels.map(|l| format!("{} |", pad(&l[i]))).unwrap_or_default();
        let _ = writeln!(out, "  {lead} {}", cells.join(" "));
    }
}

impl Report {
    pub fn new(command: String) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            results: Vec::new(),
            timing: Timing { elapsed_us: 0 },
            exit_status: 0,
            error: None,
        }
    }

    pub fn push(&mut self, r: Record) {
        if r.failed() {
            self.exit_status = self.exit_status.max(1);
        }
        self.results.push(r);
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command);
        for input in &self.inputs {
            let _ = match input {
                Input::Example { id } => writeln!(out, "input: example {id}"),
                Input::File { path } => writeln!(out, "input: file {path}"),
                Input::Generated { size } => writeln!(out, "input: all algebras of size {size}"),
            };
        }
        for r in &self.results {
            render(&mut out, r);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(
            out,
            "exit status {} ({} us, ioml {}, schema {})",
            self.exit_status, self.timing.elapsed_us, self.tool_version, self.schema_version
        );
        out
    }
}

fn render(out: &mut String, r: &Record) {
    match r {
        Record::Check {
            id,
            formula,
            holds,
            witness,
            evaluations,
        } => {
            let verdict = if *holds {
                "holds".to_string()
            } else {
                format!("FAILS at {}", bindings(witness))
            };
            let _ = writeln!(out, "{id}: {verdict}  [{formula}] ({evaluations} assignments)");
        }
        Record::Skipped { id, reason } => {
            let _ = writeln!(out, "{id}: not applicable ({reason})");
        }
        Record::Class {
            class,
            name,
            member,
            failing,
        } => {
            let mark = if *member { "yes" } else { "no " };
            let _ = write!(out, "{class:<8} {mark}  {name}");
            for f in failing {
                let _ = write!(out, "; {} fails at {}", f.axiom, bindings(&f.witness));
            }
            out.push('\n');
        }
        Record::Table { op, elements, rows } => {
            let _ = writeln!(out, "{op}:");
            if rows.len() == 1 {
                grid(out, elements, rows, None);
            } else {
                grid(out, elements, rows, Some(elements));
            }
        }
        Record::Transform { from, to, output, text } => {
            let _ = writeln!(out, "{from} -> {to}");
            if let Some(path) = output {
                let _ = writeln!(out, "written to {path}");
            }
            if let Some(text) = text {
                out.push_str(text);
            }
        }
        Record::Enumeration {
            size,
            modulo_iso,
            workers,
            models,
            unfiltered,
            nodes,
            output,
            listing,
        } => {
            let mode = if *modulo_iso { "up to isomorphism" } else { "labeled" };
            let _ = writeln!(
                out,
                "size {size}, {mode}: {models} models ({unfiltered} before filtering, {nodes} search nodes, {workers} workers)"
            );
            if let Some(path) = output {
                let _ = writeln!(out, "dump written to {path}");
            }
            for m in listing {
                let _ = writeln!(out, "  {} {}", m.name, m.canonical);
            }
        }
        Record::Theorem {
            id,
            description,
            statements,
            models_examined,
            instances,
            violations,
            separating,
        } => {
            let _ = writeln!(
                out,
                "{id}: {} violations on {models_examined} models ({instances} non-vacuous)  {description}",
                violations.len()
            );
            for s in statements {
                let _ = writeln!(out, "  {s}");
            }
            for v in violations {
                let _ = writeln!(out, "  violated on {}: {} ({})", v.model, v.statement, v.detail);
            }
            if let Some(sep) = separating {
                let shown = if sep.is_empty() { "none found".to_string() } else { sep.join(" ") };
                let _ = writeln!(out, "  separated by: {shown}");
            }
        }
        Record::Listing { what, entries } => {
            let _ = writeln!(out, "{what}:");
            for e in entries {
                let _ = writeln!(out, "  {}", e.join("  "));
            }
        }
    }
}
