//! Named axioms and derived-identity suites.
//!
//! Both catalogs are plain text shipped under `resources/` and embedded at
//! build time; [`Catalog::parse`] accepts user-supplied extensions in the same
//! format.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{
    check_formula, parse_formula, CheckResult, EvalError, Interpretation, ParseError,
    QuasiIdentity, Signature,
};

const AXIOMS: &str = include_str!("../resources/axioms.catalog");
const SUITES: &str = include_str!("../resources/suites.catalog");

/// One catalog entry.
#[derive(Debug, Clone)]
pub struct Axiom {
    pub id: String,
    pub context: Signature,
    /// The formula as written in the catalog.
    pub text: String,
    pub formula: QuasiIdentity,
    pub citation: String,
}

#[derive(Debug, Clone)]
pub struct SuiteItem {
    pub label: String,
    pub text: String,
    pub formula: QuasiIdentity,
}

/// A group of identities that hold whenever `hypotheses` do.
#[derive(Debug, Clone)]
pub struct Suite {
    pub id: String,
    pub hypotheses: Vec<String>,
    pub title: String,
    pub items: Vec<SuiteItem>,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: formula for `{id}` does not parse: {source}")]
    Formula {
        line: usize,
        id: String,
        source: ParseError,
    },
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("axiom `{axiom}` is stated for {context} algebras, not {found}")]
    ContextMismatch {
        axiom: String,
        context: Signature,
        found: Signature,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Whether a structure of signature `found` can evaluate formulas written
/// for `context`. Arrow and product structures are interdefinable, so each
/// reads the other's formulas through its derived operations.
pub fn context_compatible(context: Signature, found: Signature) -> bool {
    context == found || (context != Signature::Lattice && found != Signature::Lattice)
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    axioms: Vec<Axiom>,
    suites: Vec<Suite>,
}

fn fields(line: &str) -> Vec<&str> {
    line.split('|').map(str::trim).collect()
}

fn content(raw: &str) -> Option<&str> {
    let line = raw.trim();
    (!line.is_empty() && !line.starts_with('#')).then_some(line)
}

impl Catalog {
    /// Parses an axiom catalog (`id | context | formula | citation`) and a
    /// suite catalog. Either text may be empty.
    pub fn parse(axioms: &str, suites: &str) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::default();
        cat.extend_axioms(axioms)?;
        cat.extend_suites(suites)?;
        Ok(cat)
    }

    pub fn extend_axioms(&mut self, text: &str) -> Result<(), CatalogError> {
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let Some(body) = content(raw) else { continue };
            let f = fields(body);
            if f.len() != 4 || f[0].is_empty() {
                return Err(CatalogError::Syntax {
                    line,
                    message: "expected `id | context | formula | citation`".into(),
                });
            }
            let context = Signature::from_id(f[1]).ok_or_else(|| CatalogError::Syntax {
                line,
                message: format!("unknown context `{}`", f[1]),
            })?;
            let formula = parse_formula(f[2]).map_err(|source| CatalogError::Formula {
                line,
                id: f[0].to_string(),
                source,
            })?;
            if self.axiom(f[0]).is_some() {
                return Err(CatalogError::Duplicate(f[0].to_string()));
            }
            self.axioms.push(Axiom {
                id: f[0].to_string(),
                context,
                text: f[2].to_string(),
                formula,
                citation: f[3].to_string(),
            });
        }
        Ok(())
    }

    pub fn extend_suites(&mut self, text: &str) -> Result<(), CatalogError> {
        let mut current: Option<usize> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let Some(body) = content(raw) else { continue };
            if let Some(header) = body.strip_prefix("suite ") {
                let f = fields(header);
                if f.len() != 3 || f[0].is_empty() {
                    return Err(CatalogError::Syntax {
                        line,
                        message: "expected `suite id | hypotheses | title`".into(),
                    });
                }
                if self.suite(f[0]).is_some() {
                    return Err(CatalogError::Duplicate(f[0].to_string()));
                }
                let hypotheses: Vec<String> = if f[1] == "-" {
                    Vec::new()
                } else {
                    f[1].split(',').map(|h| h.trim().to_string()).collect()
                };
                for h in &hypotheses {
                    if self.axiom(h).is_none() {
                        return Err(CatalogError::UnknownAxiom(h.clone()));
                    }
                }
                self.suites.push(Suite {
                    id: f[0].to_string(),
                    hypotheses,
                    title: f[2].to_string(),
                    items: Vec::new(),
                });
                current = Some(self.suites.len() - 1);
                continue;
            }
            let f = fields(body);
            let suite = match current {
                Some(k) if f.len() == 3 && f[0] == self.suites[k].id => &mut self.suites[k],
                _ => {
                    return Err(CatalogError::Syntax {
                        line,
                        message: "expected `suite-id | label | formula` under its header".into(),
                    })
                }
            };
            let formula = parse_formula(f[2]).map_err(|source| CatalogError::Formula {
                line,
                id: format!("{}/{}", f[0], f[1]),
                source,
            })?;
            if suite.items.iter().any(|i| i.label == f[1]) {
                return Err(CatalogError::Duplicate(format!("{}/{}", f[0], f[1])));
            }
            suite.items.push(SuiteItem {
                label: f[1].to_string(),
                text: f[2].to_string(),
                formula,
            });
        }
        Ok(())
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn suites(&self) -> &[Suite] {
        &self.suites
    }

    pub fn axiom(&self, id: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.id == id)
    }

    pub fn suite(&self, id: &str) -> Option<&Suite> {
        self.suites.iter().find(|s| s.id == id)
    }

    pub fn get(&self, id: &str) -> Result<&Axiom, CatalogError> {
        self.axiom(id)
            .ok_or_else(|| CatalogError::UnknownAxiom(id.to_string()))
    }

    pub fn check<I: Interpretation + ?Sized>(
        &self,
        interp: &I,
        id: &str,
    ) -> Result<CheckResult, CheckError> {
        let ax = self.get(id)?;
        if !context_compatible(ax.context, interp.signature()) {
            return Err(CheckError::ContextMismatch {
                axiom: ax.id.clone(),
                context: ax.context,
                found: interp.signature(),
            });
        }
        let mut r = check_formula(interp, &ax.formula)?;
        r.axiom = Some(ax.id.clone());
        Ok(r)
    }

    /// Checks a conjunction of axioms, returning one result per id.
    pub fn check_all<I: Interpretation + ?Sized>(
        &self,
        interp: &I,
        ids: &[&str],
    ) -> Result<Vec<CheckResult>, CheckError> {
        ids.iter().map(|id| self.check(interp, id)).collect()
    }

    pub fn run_suite<I: Interpretation + ?Sized>(
        &self,
        interp: &I,
        id: &str,
    ) -> Result<SuiteReport, CheckError> {
        let suite = self
            .suite(id)
            .ok_or_else(|| CatalogError::UnknownSuite(id.to_string()))?;
        let hypotheses: Vec<CheckResult> = suite
            .hypotheses
            .iter()
            .map(|h| self.check(interp, h))
            .collect::<Result<_, _>>()?;
        let applicable = hypotheses.iter().all(|h| h.holds);
        let mut items = Vec::new();
        if applicable {
            for item in &suite.items {
                let mut result = check_formula(interp, &item.formula)?;
                result.axiom = Some(format!("{}/{}", suite.id, item.label));
                items.push(ItemResult {
                    label: item.label.clone(),
                    formula: item.text.clone(),
                    result,
                });
            }
        }
        Ok(SuiteReport {
            suite: suite.id.clone(),
            hypotheses,
            applicable,
            items,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemResult {
    pub label: String,
    pub formula: String,
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub hypotheses: Vec<CheckResult>,
    /// False when some hypothesis fails; `items` is then empty.
    pub applicable: bool,
    pub items: Vec<ItemResult>,
}

impl SuiteReport {
    /// Inapplicable suites count as passing.
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.result.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemResult> {
        self.items.iter().filter(|i| !i.result.holds)
    }
}

/// The embedded catalog.
pub fn builtin() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::parse(AXIOMS, SUITES).expect("embedded catalog is valid"))
}

pub fn builtin_axiom(id: &str) -> Result<&'static Axiom, CatalogError> {
    builtin().get(id)
}

pub fn check_axiom<I: Interpretation + ?Sized>(
    interp: &I,
    id: &str,
) -> Result<CheckResult, CheckError> {
    builtin().check(interp, id)
}

pub fn run_identity_suite<I: Interpretation + ?Sized>(
    interp: &I,
    suite: &str,
) -> Result<SuiteReport, CheckError> {
    builtin().run_suite(interp, suite)
}

/// Axiom ids of the embedded catalog in file order.
pub fn builtin_ids() -> Vec<&'static str> {
    builtin().axioms().iter().map(|a| a.id.as_str()).collect()
}
