use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Atom, BinOp, Constant, QuasiIdentity, Relation, Term};
use crate::algebra::{DerivedOp, Element, InvolutiveAlgebra};

/// The signature an interpretation natively provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// `(X, ->, 0, 1)`: involutive BE algebras.
    Arrow,
    /// `(X, ., *, 1)`: involutive m-BE algebras.
    Product,
    /// `(X, /\, \/, ', 0, 1)`: ortholattice-like structures.
    Lattice,
}

impl Signature {
    pub fn id(self) -> &'static str {
        match self {
            Signature::Arrow => "arrow",
            Signature::Product => "product",
            Signature::Lattice => "lattice",
        }
    }

    pub fn from_id(s: &str) -> Option<Signature> {
        match s {
            "arrow" => Some(Signature::Arrow),
            "product" => Some(Signature::Product),
            "lattice" => Some(Signature::Lattice),
            _ => None,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A finite structure terms can be evaluated in.
///
/// `binary` is only called for operations `supports` accepts.
pub trait Interpretation {
    fn signature(&self) -> Signature;
    fn size(&self) -> usize;
    fn one(&self) -> Element;
    fn zero(&self) -> Element;
    fn star(&self, x: Element) -> Element;
    fn supports(&self, op: BinOp) -> bool;
    fn binary(&self, op: BinOp, x: Element, y: Element) -> Element;
    fn leq(&self, x: Element, y: Element) -> bool;
    fn leq_q(&self, x: Element, y: Element) -> bool;
    fn element_name(&self, x: Element) -> &str;
}

impl Interpretation for InvolutiveAlgebra {
    fn signature(&self) -> Signature {
        Signature::Arrow
    }

    fn size(&self) -> usize {
        InvolutiveAlgebra::size(self)
    }

    fn one(&self) -> Element {
        InvolutiveAlgebra::one(self)
    }

    fn zero(&self) -> Element {
        InvolutiveAlgebra::zero(self)
    }

    fn star(&self, x: Element) -> Element {
        InvolutiveAlgebra::star(self, x)
    }

    fn supports(&self, op: BinOp) -> bool {
        !matches!(op, BinOp::Meet | BinOp::Join)
    }

    fn binary(&self, op: BinOp, x: Element, y: Element) -> Element {
        match op {
            BinOp::Arrow => self.arrow(x, y),
            BinOp::Cup => self.derived(DerivedOp::Cup, x, y),
            BinOp::Cap => self.derived(DerivedOp::Cap, x, y),
            BinOp::Odot => self.derived(DerivedOp::Odot, x, y),
            BinOp::Oplus => self.derived(DerivedOp::Oplus, x, y),
            BinOp::Meet | BinOp::Join => unreachable!("lattice operation on an arrow algebra"),
        }
    }

    fn leq(&self, x: Element, y: Element) -> bool {
        InvolutiveAlgebra::leq(self, x, y)
    }

    fn leq_q(&self, x: Element, y: Element) -> bool {
        InvolutiveAlgebra::leq_q(self, x, y)
    }

    fn element_name(&self, x: Element) -> &str {
        self.name(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("operation `{op}` is not available in the {signature} signature")]
    Unsupported { op: &'static str, signature: Signature },
    #[error("element {element} outside 0..{size}")]
    OutOfRange { element: Element, size: usize },
}

/// Values for variables, in quantifier order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Assignment(pub Vec<(String, Element)>);

impl Assignment {
    pub fn new(pairs: &[(&str, Element)]) -> Assignment {
        Assignment(pairs.iter().map(|(v, x)| (v.to_string(), *x)).collect())
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.0.iter().find(|(v, _)| v == var).map(|(_, x)| *x)
    }

    pub fn values(&self) -> Vec<Element> {
        self.0.iter().map(|(_, x)| *x).collect()
    }

    /// `x=a, y=c` using the interpretation's element names.
    pub fn render(&self, interp: &(impl Interpretation + ?Sized)) -> String {
        self.render_with(|x| interp.element_name(x).to_string())
    }

    pub fn render_with(&self, name: impl Fn(Element) -> String) -> String {
        self.0
            .iter()
            .map(|(v, x)| format!("{v}={}", name(*x)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Outcome of a universally quantified check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Catalog identifier when the formula came from the axiom catalog.
    pub axiom: Option<String>,
    pub holds: bool,
    /// The lexicographically first falsifying assignment; present iff `!holds`.
    pub witness: Option<Assignment>,
    /// Assignments examined.
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Stop at the first falsifying assignment.
    #[default]
    EarlyExit,
    /// Visit every assignment; used to cross-check the early-exit path.
    Exhaustive,
}

#[derive(Debug)]
enum Node {
    Var(usize),
    Const(Element),
    Star(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

impl Node {
    #[inline]
    fn eval<I: Interpretation + ?Sized>(&self, i: &I, env: &[Element]) -> Element {
        match self {
            Node::Var(k) => env[*k],
            Node::Const(c) => *c,
            Node::Star(t) => i.star(t.eval(i, env)),
            Node::Bin(op, l, r) => i.binary(*op, l.eval(i, env), r.eval(i, env)),
        }
    }
}

fn require_ops<I: Interpretation + ?Sized>(i: &I, ops: &[BinOp]) -> Result<(), EvalError> {
    match ops.iter().find(|op| !i.supports(**op)) {
        Some(op) => Err(EvalError::Unsupported {
            op: op.symbol(),
            signature: i.signature(),
        }),
        None => Ok(()),
    }
}

fn compile<I: Interpretation + ?Sized>(
    i: &I,
    t: &Term,
    vars: &[String],
) -> Result<Node, EvalError> {
    Ok(match t {
        Term::Var(v) => Node::Var(
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| EvalError::Unbound(v.clone()))?,
        ),
        Term::Const(Constant::One) => Node::Const(i.one()),
        Term::Const(Constant::Zero) => Node::Const(i.zero()),
        Term::Star(t) => Node::Star(Box::new(compile(i, t, vars)?)),
        Term::Binary(op, l, r) => {
            if !i.supports(*op) {
                return Err(EvalError::Unsupported {
                    op: op.symbol(),
                    signature: i.signature(),
                });
            }
            Node::Bin(*op, Box::new(compile(i, l, vars)?), Box::new(compile(i, r, vars)?))
        }
    })
}

/// Evaluates a term under an assignment.
pub fn eval_term<I: Interpretation + ?Sized>(
    interp: &I,
    term: &Term,
    assignment: &Assignment,
) -> Result<Element, EvalError> {
    let vars: Vec<String> = assignment.0.iter().map(|(v, _)| v.clone()).collect();
    let env = assignment.values();
    if let Some(&element) = env.iter().find(|&&x| x >= interp.size()) {
        return Err(EvalError::OutOfRange {
            element,
            size: interp.size(),
        });
    }
    Ok(compile(interp, term, &vars)?.eval(interp, &env))
}

struct CompiledAtom {
    rel: Relation,
    lhs: Node,
    rhs: Node,
}

impl CompiledAtom {
    #[inline]
    fn holds<I: Interpretation + ?Sized>(&self, i: &I, env: &[Element]) -> bool {
        let (l, r) = (self.lhs.eval(i, env), self.rhs.eval(i, env));
        match self.rel {
            Relation::Eq => l == r,
            Relation::Leq => i.leq(l, r),
            Relation::LeqQ => i.leq_q(l, r),
        }
    }
}

struct Compiled {
    premises: Vec<CompiledAtom>,
    conclusions: Vec<CompiledAtom>,
}

impl Compiled {
    fn new<I: Interpretation + ?Sized>(i: &I, q: &QuasiIdentity) -> Result<Self, EvalError> {
        require_ops(i, &q.ops())?;
        let atom = |a: &Atom| -> Result<CompiledAtom, EvalError> {
            Ok(CompiledAtom {
                rel: a.rel,
                lhs: compile(i, &a.lhs, q.variables())?,
                rhs: compile(i, &a.rhs, q.variables())?,
            })
        };
        Ok(Compiled {
            premises: q.premises().iter().map(atom).collect::<Result<_, _>>()?,
            conclusions: q.conclusions().iter().map(atom).collect::<Result<_, _>>()?,
        })
    }

    #[inline]
    fn falsified<I: Interpretation + ?Sized>(&self, i: &I, env: &[Element]) -> bool {
        self.premises.iter().all(|a| a.holds(i, env))
            && !self.conclusions.iter().all(|a| a.holds(i, env))
    }

    /// Scans assignments whose first variable lies in `first`, in
    /// lexicographic order. Returns the rank of the first falsifying
    /// assignment, if any.
    fn scan<I: Interpretation + ?Sized>(
        &self,
        i: &I,
        arity: usize,
        first: std::ops::Range<Element>,
        mode: CheckMode,
    ) -> (Option<Vec<Element>>, u64) {
        let n = i.size();
        let mut env = vec![0; arity];
        let mut seen = 0u64;
        let mut found: Option<Vec<Element>> = None;
        if arity == 0 {
            if first.start > 0 {
                return (None, 0);
            }
            return (self.falsified(i, &env).then(Vec::new), 1);
        }
        for head in first {
            env[0] = head;
            env[1..].iter_mut().for_each(|v| *v = 0);
            'tail: loop {
                seen += 1;
                if found.is_none() && self.falsified(i, &env) {
                    found = Some(env.clone());
                    if mode == CheckMode::EarlyExit {
                        return (found, seen);
                    }
                }
                // odometer over the tail, last variable fastest
                let mut k = arity - 1;
                while k > 0 {
                    env[k] += 1;
                    if env[k] < n {
                        continue 'tail;
                    }
                    env[k] = 0;
                    k -= 1;
                }
                break;
            }
        }
        (found, seen)
    }
}

fn assignment(q: &QuasiIdentity, env: &[Element]) -> Assignment {
    Assignment(q.variables().iter().cloned().zip(env.iter().copied()).collect())
}

fn rank(env: &[Element], n: usize) -> u64 {
    env.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64)
}

/// Checks a quasi-identity, stopping at the first counterexample.
pub fn check_formula<I: Interpretation + ?Sized>(
    interp: &I,
    q: &QuasiIdentity,
) -> Result<CheckResult, EvalError> {
    check_formula_with(interp, q, CheckMode::EarlyExit)
}

pub fn check_formula_with<I: Interpretation + ?Sized>(
    interp: &I,
    q: &QuasiIdentity,
    mode: CheckMode,
) -> Result<CheckResult, EvalError> {
    let compiled = Compiled::new(interp, q)?;
    let (found, evaluations) = compiled.scan(interp, q.variables().len(), 0..interp.size(), mode);
    Ok(CheckResult {
        axiom: None,
        holds: found.is_none(),
        witness: found.map(|env| assignment(q, &env)),
        evaluations,
    })
}

/// Splits the assignment space by the value of the first variable across
/// `workers` threads. The witness is the globally lexicographically first
/// one, and `evaluations` equals what the early-exit path reports.
pub fn check_formula_parallel<I: Interpretation + Sync + ?Sized>(
    interp: &I,
    q: &QuasiIdentity,
    workers: usize,
) -> Result<CheckResult, EvalError> {
    let arity = q.variables().len();
    let n = interp.size();
    if arity == 0 || workers <= 1 || n == 1 {
        return check_formula(interp, q);
    }
    let compiled = Compiled::new(interp, q)?;
    let workers = workers.min(n);
    let chunk = n.div_ceil(workers);
    let found: Option<Vec<Element>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(n);
                let hi = ((w + 1) * chunk).min(n);
                let compiled = &compiled;
                s.spawn(move || compiled.scan(interp, arity, lo..hi, CheckMode::EarlyExit).0)
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("check worker panicked"))
            .min()
    });
    let total = (n as u64).pow(arity as u32);
    let evaluations = found.as_ref().map_or(total, |env| rank(env, n) + 1);
    Ok(CheckResult {
        axiom: None,
        holds: found.is_none(),
        witness: found.map(|env| assignment(q, &env)),
        evaluations,
    })
}
