//! Terms, atoms and quasi-identities over the signature
//! `{->, *, cup, cap, ., oplus, /\, \/, 0, 1}`.
//!
//! Grammar (loosest first):
//!
//! ```text
//! formula   := [ "forall" ident+ ":" ] atoms [ "=>" atoms ]
//! atoms     := atom ( "&" atom )*
//! atom      := term ( "=" | "<=" | "<=Q" ) term
//! term      := mid [ "->" term ]                       right associative
//! mid       := postfix ( ("." | "cap" | "cup" | "oplus" | "/\" | "\/") postfix )*
//! postfix   := primary "*"*
//! primary   := ident | "0" | "1" | "(" term ")"
//! ```
//!
//! Without `=>` every atom is a conclusion. With `=>` the atoms on the left
//! are premises. All variables are universally quantified; unless a
//! `forall` prefix fixes the order, they are taken in sorted order, which is
//! also the order witnesses are reported in.

mod eval;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{
    check_formula, check_formula_parallel, check_formula_with, eval_term, Assignment, CheckMode,
    CheckResult, EvalError, Interpretation, Signature,
};
pub use parse::{parse_formula, parse_formula_with_limit, parse_term, ParseError};

/// Default cap on the number of quantified variables.
pub const MAX_VARIABLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constant {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinOp {
    Arrow,
    Cup,
    Cap,
    Odot,
    Oplus,
    Meet,
    Join,
}

impl BinOp {
    pub const ALL: [BinOp; 7] = [
        BinOp::Arrow,
        BinOp::Cup,
        BinOp::Cap,
        BinOp::Odot,
        BinOp::Oplus,
        BinOp::Meet,
        BinOp::Join,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Arrow => "->",
            BinOp::Cup => "cup",
            BinOp::Cap => "cap",
            BinOp::Odot => ".",
            BinOp::Oplus => "oplus",
            BinOp::Meet => "/\\",
            BinOp::Join => "\\/",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(Constant),
    /// Negation: `x*` (the orthocomplement in the lattice signature).
    Star(Box<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn one() -> Term {
        Term::Const(Constant::One)
    }

    pub fn zero() -> Term {
        Term::Const(Constant::Zero)
    }

    pub fn star(self) -> Term {
        Term::Star(Box::new(self))
    }

    pub fn bin(op: BinOp, lhs: Term, rhs: Term) -> Term {
        Term::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn arrow(lhs: Term, rhs: Term) -> Term {
        Term::bin(BinOp::Arrow, lhs, rhs)
    }

    /// Every variable occurrence, left to right.
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Term::Var(v) => f(v),
            Term::Const(_) => {}
            Term::Star(t) => t.visit_vars(f),
            Term::Binary(_, l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    pub fn ops(&self, out: &mut Vec<BinOp>) {
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::Star(t) => t.ops(out),
            Term::Binary(op, l, r) => {
                if !out.contains(op) {
                    out.push(*op);
                }
                l.ops(out);
                r.ops(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Star(t) => 1 + t.depth(),
            Term::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

// Printing precedence: arrow = 1, infix = 2, postfix/atomic = 3.
fn level(t: &Term) -> u8 {
    match t {
        Term::Binary(BinOp::Arrow, ..) => 1,
        Term::Binary(..) => 2,
        _ => 3,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, t: &Term, min_level: u8) -> fmt::Result {
    if level(t) < min_level {
        write!(f, "(")?;
        write!(f, "{t}")?;
        write!(f, ")")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(Constant::One) => f.write_str("1"),
            Term::Const(Constant::Zero) => f.write_str("0"),
            Term::Star(t) => {
                write_at(f, t, 3)?;
                f.write_str("*")
            }
            Term::Binary(BinOp::Arrow, l, r) => {
                write_at(f, l, 2)?;
                f.write_str(" -> ")?;
                write_at(f, r, 1)
            }
            Term::Binary(op, l, r) => {
                write_at(f, l, 2)?;
                write!(f, " {} ", op.symbol())?;
                write_at(f, r, 3)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    /// BE order (`x -> y = 1`); the lattice order in the lattice signature.
    Leq,
    /// Quantum order (`x = x cap y`).
    LeqQ,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Leq => "<=",
            Relation::LeqQ => "<=Q",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub rel: Relation,
    pub lhs: Term,
    pub rhs: Term,
}

impl Atom {
    pub fn new(rel: Relation, lhs: Term, rhs: Term) -> Atom {
        Atom { rel, lhs, rhs }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Atom {
        Atom::new(Relation::Eq, lhs, rhs)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable `{0}` is not declared")]
    Undeclared(String),
    #[error("variable `{0}` declared twice")]
    DuplicateDeclaration(String),
    #[error("{found} variables exceed the limit of {limit}")]
    TooManyVariables { found: usize, limit: usize },
    #[error("a formula needs at least one conclusion")]
    NoConclusion,
}

/// `premises => conclusions`, universally quantified over `variables`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuasiIdentity {
    variables: Vec<String>,
    premises: Vec<Atom>,
    conclusions: Vec<Atom>,
}

impl QuasiIdentity {
    /// `variables: None` quantifies over the used variables in sorted order.
    pub fn new(
        variables: Option<Vec<String>>,
        premises: Vec<Atom>,
        conclusions: Vec<Atom>,
        limit: usize,
    ) -> Result<Self, FormulaError> {
        if conclusions.is_empty() {
            return Err(FormulaError::NoConclusion);
        }
        let used = used_variables(premises.iter().chain(&conclusions));
        let variables = match variables {
            None => used,
            Some(declared) => {
                for (i, v) in declared.iter().enumerate() {
                    if declared[..i].contains(v) {
                        return Err(FormulaError::DuplicateDeclaration(v.clone()));
                    }
                }
                if let Some(v) = used.iter().find(|v| !declared.contains(v)) {
                    return Err(FormulaError::Undeclared(v.clone()));
                }
                declared
            }
        };
        if variables.len() > limit {
            return Err(FormulaError::TooManyVariables {
                found: variables.len(),
                limit,
            });
        }
        Ok(QuasiIdentity {
            variables,
            premises,
            conclusions,
        })
    }

    pub fn identity(lhs: Term, rhs: Term) -> Result<Self, FormulaError> {
        Self::new(None, Vec::new(), vec![Atom::eq(lhs, rhs)], MAX_VARIABLES)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn premises(&self) -> &[Atom] {
        &self.premises
    }

    pub fn conclusions(&self) -> &[Atom] {
        &self.conclusions
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.premises.iter().chain(&self.conclusions)
    }

    /// Binary operations the formula mentions.
    pub fn ops(&self) -> Vec<BinOp> {
        let mut out = Vec::new();
        for atom in self.atoms() {
            atom.lhs.ops(&mut out);
            atom.rhs.ops(&mut out);
        }
        out
    }

    fn has_implicit_order(&self) -> bool {
        self.variables == used_variables(self.atoms())
    }
}

fn used_variables<'a>(atoms: impl Iterator<Item = &'a Atom>) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for atom in atoms {
        for t in [&atom.lhs, &atom.rhs] {
            t.visit_vars(&mut |v| {
                if !vars.iter().any(|w| w == v) {
                    vars.push(v.to_string());
                }
            });
        }
    }
    vars.sort();
    vars
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.has_implicit_order() {
            write!(f, "forall {}: ", self.variables.join(" "))?;
        }
        let join = |f: &mut fmt::Formatter<'_>, atoms: &[Atom]| -> fmt::Result {
            for (i, a) in atoms.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{a}")?;
            }
            Ok(())
        };
        if !self.premises.is_empty() {
            join(f, &self.premises)?;
            f.write_str(" => ")?;
        }
        join(f, &self.conclusions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_uses_minimal_parentheses() {
        let x = || Term::var("x");
        let y = || Term::var("y");
        let t = Term::arrow(Term::arrow(x(), y()), x());
        assert_eq!(t.to_string(), "(x -> y) -> x");
        let t = Term::arrow(x(), Term::arrow(y(), x()));
        assert_eq!(t.to_string(), "x -> y -> x");
        let t = Term::arrow(x(), y()).star().star();
        assert_eq!(t.to_string(), "(x -> y)**");
        let t = Term::bin(BinOp::Cap, x(), Term::bin(BinOp::Cap, y(), x()));
        assert_eq!(t.to_string(), "x cap (y cap x)");
        let t = Term::bin(BinOp::Cap, Term::bin(BinOp::Cap, x(), y()), x());
        assert_eq!(t.to_string(), "x cap y cap x");
    }

    #[test]
    fn implicit_variable_order_is_sorted() {
        let q = QuasiIdentity::identity(
            Term::arrow(Term::var("z"), Term::var("x")),
            Term::one(),
        )
        .unwrap();
        assert_eq!(q.variables(), ["x", "z"]);
        assert_eq!(q.to_string(), "z -> x = 1");
    }

    #[test]
    fn explicit_order_is_printed() {
        let q = QuasiIdentity::new(
            Some(vec!["z".into(), "x".into()]),
            vec![],
            vec![Atom::eq(Term::var("x"), Term::var("z"))],
            MAX_VARIABLES,
        )
        .unwrap();
        assert_eq!(q.to_string(), "forall z x: x = z");
    }

    #[test]
    fn declaration_errors() {
        let atom = || vec![Atom::eq(Term::var("x"), Term::var("y"))];
        assert_eq!(
            QuasiIdentity::new(Some(vec!["x".into()]), vec![], atom(), 6).unwrap_err(),
            FormulaError::Undeclared("y".into())
        );
        assert_eq!(
            QuasiIdentity::new(None, vec![], atom(), 1).unwrap_err(),
            FormulaError::TooManyVariables { found: 2, limit: 1 }
        );
        assert_eq!(
            QuasiIdentity::new(None, atom(), vec![], 6).unwrap_err(),
            FormulaError::NoConclusion
        );
    }
}
