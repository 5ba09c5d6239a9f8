//! Translations between the arrow, product and lattice signatures.
//!
//! | direction              | definition                      |
//! |------------------------|---------------------------------|
//! | arrow to product       | `x . y = (x -> y*)*`            |
//! | product to arrow       | `x -> y = (x . y*)*`            |
//! | arrow to lattice       | `x /\ y = (x -> y*)*`, `x \/ y = x* -> y`, `x' = x*` |
//! | lattice to arrow       | `x -> y = (x /\ y')'`           |
//!
//! The arrow/product pair is a bijection between involutive BE algebras and
//! involutive m-BE algebras. The arrow/lattice pair is a bijection between
//! implicative involutive BE algebras and ortholattices. Every output is
//! re-validated in its target signature.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{default_names, BuildError, Element, InvolutiveAlgebra, StructureError};
use crate::axioms::{self, CheckError};
use crate::term::{BinOp, CheckResult, Interpretation, Signature};
use crate::text::{write_header, write_table, write_unary, Document, LoadError, TextError};

/// Axioms every product algebra must satisfy.
pub const PRODUCT_AXIOMS: [&str; 5] = ["PU", "Pcomm", "Pass", "m-L", "m-Re"];

/// Axioms of an ortholattice.
pub const ORTHOLATTICE_AXIOMS: [&str; 9] = ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9"];

/// Every lattice-context axiom in the catalog.
pub const LATTICE_AXIOMS: [&str; 14] = [
    "L1", "L2", "L3", "L4", "L4'", "L5", "L6", "L7", "L8", "L9", "OM", "OM'", "Wmod", "Vmod",
];

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("`{table}` is not an involution: x** != x at x = {witness}")]
    NotInvolution { table: &'static str, witness: String },
    /// Named axioms failed; each result carries its witness.
    #[error("{}", axioms_message(.failed))]
    Axioms { failed: Vec<CheckResult> },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("document has no `{0}` block")]
    Signature(&'static str),
}

impl From<LoadError> for TransformError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Text(t) => TransformError::Text(t),
            LoadError::Algebra(a) => TransformError::Build(a.into()),
        }
    }
}

fn axioms_message(failed: &[CheckResult]) -> String {
    failed
        .iter()
        .map(|r| {
            let id = r.axiom.as_deref().unwrap_or("?");
            match &r.witness {
                Some(w) => format!("{id} fails at {}", w.render_with(|x| x.to_string())),
                None => format!("{id} fails"),
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn flatten(rows: &[Vec<Element>], size: usize) -> Result<Vec<Element>, StructureError> {
    if rows.len() != size {
        return Err(StructureError::RowCount {
            expected: size,
            found: rows.len(),
        });
    }
    let mut flat = Vec::with_capacity(size * size);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != size {
            return Err(StructureError::RowLength {
                row,
                expected: size,
                found: r.len(),
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= size {
                return Err(StructureError::CellOutOfRange {
                    row,
                    col,
                    value,
                    size,
                });
            }
            flat.push(value);
        }
    }
    Ok(flat)
}

fn unary(table: &[Element], size: usize) -> Result<(), StructureError> {
    if table.len() != size {
        return Err(StructureError::RowLength {
            row: 0,
            expected: size,
            found: table.len(),
        });
    }
    match table.iter().enumerate().find(|(_, &v)| v >= size) {
        Some((col, &value)) => Err(StructureError::CellOutOfRange {
            row: 0,
            col,
            value,
            size,
        }),
        None => Ok(()),
    }
}

fn names_for(size: usize, one: Element, zero: Element, names: Option<Vec<String>>) -> Result<Vec<String>, StructureError> {
    for (which, index) in [("one", one), ("zero", zero)] {
        if index >= size {
            return Err(StructureError::ConstantOutOfRange { which, index, size });
        }
    }
    match names {
        None => Ok(default_names(size, one, zero)),
        Some(names) if names.len() != size => Err(StructureError::NameCount {
            expected: size,
            found: names.len(),
        }),
        Some(names) => {
            for (i, n) in names.iter().enumerate() {
                if names[..i].contains(n) {
                    return Err(StructureError::DuplicateName(n.clone()));
                }
            }
            Ok(names)
        }
    }
}

fn involution(table: &'static str, t: &[Element], names: &[String]) -> Result<(), TransformError> {
    match (0..t.len()).find(|&x| t[t[x]] != x) {
        Some(x) => Err(TransformError::NotInvolution {
            table,
            witness: names[x].clone(),
        }),
        None => Ok(()),
    }
}

fn require<I: Interpretation + ?Sized>(interp: &I, ids: &[&str]) -> Result<(), TransformError> {
    let failed: Vec<CheckResult> = axioms::builtin()
        .check_all(interp, ids)?
        .into_iter()
        .filter(|r| !r.holds)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(TransformError::Axioms { failed })
    }
}

/// Arrow-derived tables of a product algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Derived {
    arrow: Vec<Element>,
    cup: Vec<Element>,
    cap: Vec<Element>,
}

impl Derived {
    fn new(n: usize, star: &[Element], arrow: impl Fn(Element, Element) -> Element) -> Derived {
        let arrow: Vec<Element> = (0..n * n).map(|i| arrow(i / n, i % n)).collect();
        let to = |x: Element, y: Element| arrow[x * n + y];
        let cup = (0..n * n).map(|i| to(to(i / n, i % n), i % n)).collect();
        let cap = (0..n * n)
            .map(|i| {
                let (xs, ys) = (star[i / n], star[i % n]);
                star[to(to(xs, ys), ys)]
            })
            .collect();
        Derived { arrow, cup, cap }
    }
}

/// An involutive m-BE algebra `(X, ., *, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductAlgebra {
    names: Vec<String>,
    odot: Vec<Element>,
    star: Vec<Element>,
    one: Element,
    derived: Derived,
}

impl ProductAlgebra {
    /// Validates `odot` and `star` against the m-BE axioms. `zero` is
    /// `star(one)`.
    pub fn new(
        odot: &[Vec<Element>],
        star: Vec<Element>,
        one: Element,
        names: Option<Vec<String>>,
    ) -> Result<Self, TransformError> {
        let n = odot.len();
        if n == 0 {
            return Err(StructureError::Empty.into());
        }
        let odot = flatten(odot, n)?;
        unary(&star, n)?;
        if one >= n {
            return Err(StructureError::ConstantOutOfRange {
                which: "one",
                index: one,
                size: n,
            }
            .into());
        }
        let names = names_for(n, one, star[one], names)?;
        involution("star", &star, &names)?;
        let derived = Derived::new(n, &star, |x, y| star[odot[x * n + star[y]]]);
        let p = ProductAlgebra {
            names,
            odot,
            star,
            one,
            derived,
        };
        require(&p, &PRODUCT_AXIOMS)?;
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn one(&self) -> Element {
        self.one
    }

    pub fn zero(&self) -> Element {
        self.star[self.one]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn odot(&self, x: Element, y: Element) -> Element {
        self.odot[x * self.size() + y]
    }

    pub fn star(&self, x: Element) -> Element {
        self.star[x]
    }

    pub fn oplus(&self, x: Element, y: Element) -> Element {
        self.star[self.odot(self.star[x], self.star[y])]
    }

    /// `x -> y = (x . y*)*`
    pub fn arrow(&self, x: Element, y: Element) -> Element {
        self.derived.arrow[x * self.size() + y]
    }

    pub fn odot_table(&self) -> Vec<Vec<Element>> {
        let n = self.size();
        (0..n).map(|x| (0..n).map(|y| self.odot(x, y)).collect()).collect()
    }

    pub fn star_table(&self) -> &[Element] {
        &self.star
    }
}

impl Interpretation for ProductAlgebra {
    fn signature(&self) -> Signature {
        Signature::Product
    }

    fn size(&self) -> usize {
        ProductAlgebra::size(self)
    }

    fn one(&self) -> Element {
        self.one
    }

    fn zero(&self) -> Element {
        ProductAlgebra::zero(self)
    }

    fn star(&self, x: Element) -> Element {
        self.star[x]
    }

    fn supports(&self, op: BinOp) -> bool {
        !matches!(op, BinOp::Meet | BinOp::Join)
    }

    fn binary(&self, op: BinOp, x: Element, y: Element) -> Element {
        let i = x * self.size() + y;
        match op {
            BinOp::Odot => self.odot[i],
            BinOp::Oplus => self.oplus(x, y),
            BinOp::Arrow => self.derived.arrow[i],
            BinOp::Cup => self.derived.cup[i],
            BinOp::Cap => self.derived.cap[i],
            BinOp::Meet | BinOp::Join => unreachable!("lattice operation on a product algebra"),
        }
    }

    fn leq(&self, x: Element, y: Element) -> bool {
        self.arrow(x, y) == self.one
    }

    fn leq_q(&self, x: Element, y: Element) -> bool {
        self.derived.cap[x * self.size() + y] == x
    }

    fn element_name(&self, x: Element) -> &str {
        &self.names[x]
    }
}

/// A bounded lattice with a complement, `(X, /\, \/, ', 0, 1)`.
///
/// Construction checks only that the tables are total and that the
/// complement is an involution; [`check_lattice_axioms`] decides the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeAlgebra {
    names: Vec<String>,
    meet: Vec<Element>,
    join: Vec<Element>,
    complement: Vec<Element>,
    zero: Element,
    one: Element,
}

impl LatticeAlgebra {
    pub fn new(
        meet: &[Vec<Element>],
        join: &[Vec<Element>],
        complement: Vec<Element>,
        zero: Element,
        one: Element,
        names: Option<Vec<String>>,
    ) -> Result<Self, TransformError> {
        let n = meet.len();
        if n == 0 {
            return Err(StructureError::Empty.into());
        }
        let meet = flatten(meet, n)?;
        let join = flatten(join, n)?;
        unary(&complement, n)?;
        let names = names_for(n, one, zero, names)?;
        involution("complement", &complement, &names)?;
        Ok(LatticeAlgebra {
            names,
            meet,
            join,
            complement,
            zero,
            one,
        })
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

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn meet(&self, x: Element, y: Element) -> Element {
        self.meet[x * self.size() + y]
    }

    pub fn join(&self, x: Element, y: Element) -> Element {
        self.join[x * self.size() + y]
    }

    pub fn complement(&self, x: Element) -> Element {
        self.complement[x]
    }

    pub fn meet_table(&self) -> Vec<Vec<Element>> {
        let n = self.size();
        (0..n).map(|x| (0..n).map(|y| self.meet(x, y)).collect()).collect()
    }

    pub fn join_table(&self) -> Vec<Vec<Element>> {
        let n = self.size();
        (0..n).map(|x| (0..n).map(|y| self.join(x, y)).collect()).collect()
    }

    pub fn complement_table(&self) -> &[Element] {
        &self.complement
    }
}

/// Only `/\`, `\/` and the complement (written `*`) are available; both
/// orders are the lattice order `x = x /\ y`.
impl Interpretation for LatticeAlgebra {
    fn signature(&self) -> Signature {
        Signature::Lattice
    }

    fn size(&self) -> usize {
        LatticeAlgebra::size(self)
    }

    fn one(&self) -> Element {
        self.one
    }

    fn zero(&self) -> Element {
        self.zero
    }

    fn star(&self, x: Element) -> Element {
        self.complement[x]
    }

    fn supports(&self, op: BinOp) -> bool {
        matches!(op, BinOp::Meet | BinOp::Join)
    }

    fn binary(&self, op: BinOp, x: Element, y: Element) -> Element {
        match op {
            BinOp::Meet => self.meet(x, y),
            BinOp::Join => self.join(x, y),
            _ => unreachable!("{} on a lattice", op.symbol()),
        }
    }

    fn leq(&self, x: Element, y: Element) -> bool {
        self.meet(x, y) == x
    }

    fn leq_q(&self, x: Element, y: Element) -> bool {
        self.meet(x, y) == x
    }

    fn element_name(&self, x: Element) -> &str {
        &self.names[x]
    }
}

fn table(n: usize, f: impl Fn(Element, Element) -> Element) -> Vec<Vec<Element>> {
    (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect()
}

/// `x . y = (x -> y*)*`
pub fn be_to_product(a: &InvolutiveAlgebra) -> Result<ProductAlgebra, TransformError> {
    ProductAlgebra::new(
        &table(a.size(), |x, y| a.odot(x, y)),
        a.star_table().to_vec(),
        a.one(),
        Some(a.names().to_vec()),
    )
}

/// `x -> y = (x . y*)*`
pub fn product_to_be(p: &ProductAlgebra) -> Result<InvolutiveAlgebra, TransformError> {
    Ok(InvolutiveAlgebra::new(
        &table(p.size(), |x, y| p.arrow(x, y)),
        p.one(),
        p.zero(),
        Some(p.names().to_vec()),
    )?)
}

/// Requires `Impl`; the image is re-checked against the ortholattice axioms.
pub fn iol_to_lattice(a: &InvolutiveAlgebra) -> Result<LatticeAlgebra, TransformError> {
    require(a, &["Impl"])?;
    let n = a.size();
    let l = LatticeAlgebra::new(
        &table(n, |x, y| a.star(a.arrow(x, a.star(y)))),
        &table(n, |x, y| a.arrow(a.star(x), y)),
        a.star_table().to_vec(),
        a.zero(),
        a.one(),
        Some(a.names().to_vec()),
    )?;
    require(&l, &ORTHOLATTICE_AXIOMS)?;
    Ok(l)
}

/// Requires `L1`-`L9`; the image is re-checked for `Impl`.
pub fn lattice_to_iol(l: &LatticeAlgebra) -> Result<InvolutiveAlgebra, TransformError> {
    require(l, &ORTHOLATTICE_AXIOMS)?;
    let a = InvolutiveAlgebra::new(
        &table(l.size(), |x, y| l.complement(l.meet(x, l.complement(y)))),
        l.one(),
        l.zero(),
        Some(l.names().to_vec()),
    )?;
    require(&a, &["Impl"])?;
    Ok(a)
}

/// One result per requested lattice axiom.
pub fn check_lattice_axioms(
    l: &LatticeAlgebra,
    which: &[&str],
) -> Result<Vec<CheckResult>, CheckError> {
    axioms::builtin().check_all(l, which)
}

/// An algebra in any of the three signatures.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Arrow(InvolutiveAlgebra),
    Product(ProductAlgebra),
    Lattice(LatticeAlgebra),
}

impl AnyAlgebra {
    pub fn interpretation(&self) -> &(dyn Interpretation + Sync) {
        match self {
            AnyAlgebra::Arrow(a) => a,
            AnyAlgebra::Product(p) => p,
            AnyAlgebra::Lattice(l) => l,
        }
    }

    pub fn signature(&self) -> Signature {
        self.interpretation().signature()
    }
}

/// Reads a document in whichever signature its blocks name: `arrow`, then
/// `odot` + `star`, then `meet` + `join` + `complement`.
pub fn from_document(doc: &Document) -> Result<AnyAlgebra, TransformError> {
    let names = Some(doc.elements.clone());
    if doc.has_block("arrow") {
        let a = doc.to_algebra()?.into_involutive().map_err(BuildError::from)?;
        return Ok(AnyAlgebra::Arrow(a));
    }
    if doc.has_block("odot") {
        let p = ProductAlgebra::new(
            &doc.binary_table("odot")?,
            doc.unary_table("star")?,
            doc.constant("one")?,
            names,
        )?;
        if let Ok(zero) = doc.constant("zero") {
            if zero != p.zero() {
                return Err(TransformError::Structure(StructureError::ConstantOutOfRange {
                    which: "zero",
                    index: zero,
                    size: p.size(),
                }));
            }
        }
        return Ok(AnyAlgebra::Product(p));
    }
    if doc.has_block("meet") {
        return Ok(AnyAlgebra::Lattice(LatticeAlgebra::new(
            &doc.binary_table("meet")?,
            &doc.binary_table("join")?,
            doc.unary_table("complement")?,
            doc.constant("zero")?,
            doc.constant("one")?,
            names,
        )?));
    }
    Err(TransformError::Signature("arrow, odot or meet"))
}

pub fn write_product(p: &ProductAlgebra, name: Option<&str>) -> String {
    let mut out = String::new();
    write_header(&mut out, name, p.names(), p.one(), p.zero());
    write_unary(&mut out, "star", p.names(), p.star_table());
    write_table(&mut out, "odot", p.names(), |x, y| p.odot(x, y));
    out
}

pub fn write_lattice(l: &LatticeAlgebra, name: Option<&str>) -> String {
    let mut out = String::new();
    write_header(&mut out, name, l.names(), l.one(), l.zero());
    write_unary(&mut out, "complement", l.names(), l.complement_table());
    write_table(&mut out, "meet", l.names(), |x, y| l.meet(x, y));
    write_table(&mut out, "join", l.names(), |x, y| l.join(x, y));
    out
}

/// Target signature of [`translate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Arrow,
    Product,
    Lattice,
}

impl Target {
    pub fn from_id(s: &str) -> Option<Target> {
        match s {
            "arrow" => Some(Target::Arrow),
            "product" => Some(Target::Product),
            "lattice" => Some(Target::Lattice),
            _ => None,
        }
    }
}

/// Translates into `target`, going through the arrow signature when needed.
pub fn translate(a: &AnyAlgebra, target: &Target) -> Result<AnyAlgebra, TransformError> {
    let arrow = match a {
        AnyAlgebra::Arrow(x) => x.clone(),
        AnyAlgebra::Product(p) => product_to_be(p)?,
        AnyAlgebra::Lattice(l) => lattice_to_iol(l)?,
    };
    Ok(match target {
        Target::Arrow => AnyAlgebra::Arrow(arrow),
        Target::Product => AnyAlgebra::Product(be_to_product(&arrow)?),
        Target::Lattice => AnyAlgebra::Lattice(iol_to_lattice(&arrow)?),
    })
}

/// Renders an algebra in the text format of its signature.
pub fn write_any(a: &AnyAlgebra, name: Option<&str>) -> String {
    match a {
        AnyAlgebra::Arrow(x) => crate::text::write_algebra(x.algebra(), name),
        AnyAlgebra::Product(p) => write_product(p, name),
        AnyAlgebra::Lattice(l) => write_lattice(l, name),
    }
}
