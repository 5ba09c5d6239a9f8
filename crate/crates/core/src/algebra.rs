//! Finite bounded BE algebras given by their arrow table.
//!
//! An [`Algebra`] is validated on construction: the table must be total and
//! satisfy `BE1`–`BE4` plus boundedness of the designated zero. Validation
//! never stops at the first problem; a failing table yields a
//! [`ValidationReport`] naming every violated axiom together with its
//! lexicographically first witness tuple.
//!
//! [`InvolutiveAlgebra`] adds the derived negation `x* = x -> 0` (checked to be
//! an involution) and materializes the derived operations `cup`, `cap`,
//! `odot` and `oplus` once, so evaluation is a table lookup.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a carrier element. All computation happens on indices; names are
/// for display only.
pub type Element = usize;

/// Malformed input: the data cannot even be read as a total binary table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("an algebra needs at least one element")]
    Empty,
    #[error("expected {expected} element names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error("table has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell ({row}, {col}) holds {value}, outside 0..{size}")]
    CellOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
    #[error("constant {which} has index {index}, outside 0..{size}")]
    ConstantOutOfRange {
        which: &'static str,
        index: usize,
        size: usize,
    },
}

/// The defining axioms of a bounded BE algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BeAxiom {
    /// `x -> x = 1`
    Be1,
    /// `x -> 1 = 1`
    Be2,
    /// `1 -> x = x`
    Be3,
    /// `x -> (y -> z) = y -> (x -> z)`
    Be4,
    /// `0 -> x = 1`
    Bounded,
}

impl BeAxiom {
    pub const ALL: [BeAxiom; 5] = [
        BeAxiom::Be1,
        BeAxiom::Be2,
        BeAxiom::Be3,
        BeAxiom::Be4,
        BeAxiom::Bounded,
    ];

    /// Catalog identifier of the axiom.
    pub fn id(self) -> &'static str {
        match self {
            BeAxiom::Be1 => "BE1",
            BeAxiom::Be2 => "BE2",
            BeAxiom::Be3 => "BE3",
            BeAxiom::Be4 => "BE4",
            BeAxiom::Bounded => "Bounded",
        }
    }

    /// Names of the quantified variables, in witness order.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            BeAxiom::Be4 => &["x", "y", "z"],
            _ => &["x"],
        }
    }
}

impl fmt::Display for BeAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One violated axiom and the first assignment that breaks it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: BeAxiom,
    pub witness: Vec<Element>,
}

/// Every axiom a candidate table violates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, axiom: BeAxiom) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a bounded BE algebra:")?;
        for v in &self.violations {
            write!(f, " {} fails at", v.axiom)?;
            for (name, x) in v.axiom.variables().iter().zip(&v.witness) {
                write!(f, " {name}={x}")?;
            }
            write!(f, ";")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Axioms(ValidationReport),
}

/// The algebra is bounded but `x** != x` for the reported element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("not involutive: x** != x at x = {witness}")]
pub struct NotInvolutive {
    pub witness: Element,
}

/// Either failure on the way from raw tables to an [`InvolutiveAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    NotInvolutive(#[from] NotInvolutive),
}

/// Default display names: `0`, `a`, `b`, ..., `1`.
pub fn default_names(size: usize, one: Element, zero: Element) -> Vec<String> {
    let mut next = 0usize;
    (0..size)
        .map(|i| {
            if i == zero {
                "0".to_string()
            } else if i == one {
                "1".to_string()
            } else {
                let name = if next < 26 {
                    char::from(b'a' + next as u8).to_string()
                } else {
                    format!("e{next}")
                };
                next += 1;
                name
            }
        })
        .collect()
}

/// A validated finite bounded BE algebra `(X, ->, 0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    names: Vec<String>,
    arrow: Vec<Element>,
    one: Element,
    zero: Element,
}

impl Algebra {
    /// Builds an algebra from a row-major table (`rows[x][y] = x -> y`).
    ///
    /// `names` may be `None`, in which case [`default_names`] are used.
    pub fn new(
        rows: &[Vec<Element>],
        one: Element,
        zero: Element,
        names: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        let size = rows.len();
        if size == 0 {
            return Err(StructureError::Empty.into());
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != size {
                return Err(StructureError::RowLength {
                    row,
                    expected: size,
                    found: r.len(),
                }
                .into());
            }
        }
        let flat: Vec<Element> = rows.iter().flatten().copied().collect();
        Self::from_flat(size, flat, one, zero, names)
    }

    /// Builds an algebra from a flat row-major table of `size * size` cells.
    pub fn from_flat(
        size: usize,
        arrow: Vec<Element>,
        one: Element,
        zero: Element,
        names: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(StructureError::Empty.into());
        }
        if arrow.len() != size * size {
            return Err(StructureError::RowCount {
                expected: size,
                found: arrow.len() / size,
            }
            .into());
        }
        for (which, index) in [("one", one), ("zero", zero)] {
            if index >= size {
                return Err(StructureError::ConstantOutOfRange { which, index, size }.into());
            }
        }
        if let Some((i, &value)) = arrow.iter().enumerate().find(|(_, &v)| v >= size) {
            return Err(StructureError::CellOutOfRange {
                row: i / size,
                col: i % size,
                value,
                size,
            }
            .into());
        }
        let names = match names {
            Some(names) => {
                if names.len() != size {
                    return Err(StructureError::NameCount {
                        expected: size,
                        found: names.len(),
                    }
                    .into());
                }
                for (i, n) in names.iter().enumerate() {
                    if names[..i].contains(n) {
                        return Err(StructureError::DuplicateName(n.clone()).into());
                    }
                }
                names
            }
            None => default_names(size, one, zero),
        };
        let candidate = Algebra {
            names,
            arrow,
            one,
            zero,
        };
        let report = candidate.validate();
        if report.is_empty() {
            Ok(candidate)
        } else {
            Err(AlgebraError::Axioms(report))
        }
    }

    fn validate(&self) -> ValidationReport {
        let n = self.size();
        let mut violations = Vec::new();
        for axiom in BeAxiom::ALL {
            let witness = match axiom {
                BeAxiom::Be1 => (0..n).find(|&x| self.arrow(x, x) != self.one).map(|x| vec![x]),
                BeAxiom::Be2 => (0..n)
                    .find(|&x| self.arrow(x, self.one) != self.one)
                    .map(|x| vec![x]),
                BeAxiom::Be3 => (0..n).find(|&x| self.arrow(self.one, x) != x).map(|x| vec![x]),
                BeAxiom::Bounded => (0..n)
                    .find(|&x| self.arrow(self.zero, x) != self.one)
                    .map(|x| vec![x]),
                BeAxiom::Be4 => self.first_exchange_failure().map(|(x, y, z)| vec![x, y, z]),
            };
            if let Some(witness) = witness {
                violations.push(AxiomViolation { axiom, witness });
            }
        }
        ValidationReport { violations }
    }

    fn first_exchange_failure(&self) -> Option<(Element, Element, Element)> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.arrow(x, self.arrow(y, z)) != self.arrow(y, self.arrow(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn one(&self) -> Element {
        self.one
    }

    pub fn zero(&self) -> Element {
        self.zero
    }

    #[inline]
    pub fn arrow(&self, x: Element, y: Element) -> Element {
        self.arrow[x * self.size() + y]
    }

    /// Row-major arrow table.
    pub fn arrow_table(&self) -> &[Element] {
        &self.arrow
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Element) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    /// Same algebra with different display names.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, StructureError> {
        if names.len() != self.size() {
            return Err(StructureError::NameCount {
                expected: self.size(),
                found: names.len(),
            });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(StructureError::DuplicateName(n.clone()));
            }
        }
        self.names = names;
        Ok(self)
    }

    /// Derives `x* = x -> 0` and checks that it is an involution.
    pub fn into_involutive(self) -> Result<InvolutiveAlgebra, NotInvolutive> {
        let star: Vec<Element> = (0..self.size()).map(|x| self.arrow(x, self.zero)).collect();
        if let Some(witness) = (0..self.size()).find(|&x| star[star[x]] != x) {
            return Err(NotInvolutive { witness });
        }
        Ok(InvolutiveAlgebra::assemble(self, star))
    }
}

/// `check_involutive` under its operational name.
pub fn check_involutive(a: Algebra) -> Result<InvolutiveAlgebra, NotInvolutive> {
    a.into_involutive()
}

/// Derived binary operations of an involutive BE algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivedOp {
    /// `x cup y = (x -> y) -> y`
    Cup,
    /// `x cap y = ((x* -> y*) -> y*)*`
    Cap,
    /// `x . y = (x -> y*)*`
    Odot,
    /// `x oplus y = (x* . y*)*`
    Oplus,
}

/// The two orders of an involutive BE algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderRelation {
    /// BE order: `x -> y = 1`.
    Leq,
    /// Quantum order: `x = x cap y`.
    LeqQ,
}

/// A bounded BE algebra whose negation is an involution, with every derived
/// operation precomputed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvolutiveAlgebra {
    base: Algebra,
    star: Vec<Element>,
    cup: Vec<Element>,
    cap: Vec<Element>,
    odot: Vec<Element>,
    oplus: Vec<Element>,
}

impl InvolutiveAlgebra {
    /// Validates raw tables all the way to an involutive algebra.
    pub fn new(
        rows: &[Vec<Element>],
        one: Element,
        zero: Element,
        names: Option<Vec<String>>,
    ) -> Result<Self, BuildError> {
        Ok(Algebra::new(rows, one, zero, names)?.into_involutive()?)
    }

    fn assemble(base: Algebra, star: Vec<Element>) -> Self {
        let n = base.size();
        let mut cup = vec![0; n * n];
        let mut cap = vec![0; n * n];
        let mut odot = vec![0; n * n];
        let mut oplus = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let i = x * n + y;
                cup[i] = base.arrow(base.arrow(x, y), y);
                let (xs, ys) = (star[x], star[y]);
                cap[i] = star[base.arrow(base.arrow(xs, ys), ys)];
                odot[i] = star[base.arrow(x, ys)];
            }
        }
        for x in 0..n {
            for y in 0..n {
                oplus[x * n + y] = star[odot[star[x] * n + star[y]]];
            }
        }
        InvolutiveAlgebra {
            base,
            star,
            cup,
            cap,
            odot,
            oplus,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.base
    }

    pub fn into_algebra(self) -> Algebra {
        self.base
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    pub fn one(&self) -> Element {
        self.base.one
    }

    pub fn zero(&self) -> Element {
        self.base.zero
    }

    pub fn name(&self, x: Element) -> &str {
        self.base.name(x)
    }

    pub fn names(&self) -> &[String] {
        self.base.names()
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.base.index_of(name)
    }

    #[inline]
    pub fn arrow(&self, x: Element, y: Element) -> Element {
        self.base.arrow(x, y)
    }

    #[inline]
    pub fn star(&self, x: Element) -> Element {
        self.star[x]
    }

    pub fn star_table(&self) -> &[Element] {
        &self.star
    }

    #[inline]
    pub fn derived(&self, op: DerivedOp, x: Element, y: Element) -> Element {
        let i = x * self.size() + y;
        match op {
            DerivedOp::Cup => self.cup[i],
            DerivedOp::Cap => self.cap[i],
            DerivedOp::Odot => self.odot[i],
            DerivedOp::Oplus => self.oplus[i],
        }
    }

    pub fn cup(&self, x: Element, y: Element) -> Element {
        self.derived(DerivedOp::Cup, x, y)
    }

    pub fn cap(&self, x: Element, y: Element) -> Element {
        self.derived(DerivedOp::Cap, x, y)
    }

    pub fn odot(&self, x: Element, y: Element) -> Element {
        self.derived(DerivedOp::Odot, x, y)
    }

    pub fn oplus(&self, x: Element, y: Element) -> Element {
        self.derived(DerivedOp::Oplus, x, y)
    }

    /// Full table of a derived operation, `table[x][y] = x op y`.
    pub fn derived_table(&self, op: DerivedOp) -> Vec<Vec<Element>> {
        let n = self.size();
        (0..n)
            .map(|x| (0..n).map(|y| self.derived(op, x, y)).collect())
            .collect()
    }

    pub fn leq(&self, x: Element, y: Element) -> bool {
        self.arrow(x, y) == self.one()
    }

    pub fn leq_q(&self, x: Element, y: Element) -> bool {
        self.cap(x, y) == x
    }

    pub fn order(&self, rel: OrderRelation, x: Element, y: Element) -> bool {
        match rel {
            OrderRelation::Leq => self.leq(x, y),
            OrderRelation::LeqQ => self.leq_q(x, y),
        }
    }

    /// `matrix[x][y]` is `true` iff `x rel y`.
    pub fn order_matrix(&self, rel: OrderRelation) -> Vec<Vec<bool>> {
        let n = self.size();
        (0..n)
            .map(|x| (0..n).map(|y| self.order(rel, x, y)).collect())
            .collect()
    }
}
