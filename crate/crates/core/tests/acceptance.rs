//! Acceptance run: one PASS/FAIL line per criterion. Built with
//! `harness = false` so the lines always reach stdout.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ioml::algebra::{DerivedOp, InvolutiveAlgebra};
use ioml::axioms::{builtin, check_axiom, run_identity_suite};
use ioml::classify::{classify, ClassId};
use ioml::corpus::{load_all, load_example};
use ioml::enumerate::{enumerate_models, theorems, verify_on, write_dump, EnumerationTask, VerifyTask};
use ioml::term::{parse_formula, parse_term, BinOp, Term};
use ioml::transforms::{be_to_product, check_lattice_axioms, iol_to_lattice, product_to_be, ORTHOLATTICE_AXIOMS};

mod common;

const GOLDEN_BUDGET: Duration = Duration::from_millis(100);
const CLASSIFY_BUDGET: Duration = Duration::from_secs(1);
const METATHEOREM_BUDGET: Duration = Duration::from_secs(5 * 60);
const ENUMERATION_BUDGET: Duration = Duration::from_secs(10 * 60);
const GENERATED_ASTS: usize = 1000;
const MAX_AST_DEPTH: usize = 6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn golden_tables() -> Outcome {
    let mut parts = Vec::new();
    for (id, cells) in [("E4.14", 100), ("E4.22", 36), ("E5.15", 36)] {
        let start = Instant::now();
        let e = load_example(id).map_err(|e| e.to_string())?;
        let printed = e.printed_cap.ok_or(format!("{id}: no printed table"))?;
        let derived = e.algebra.derived_table(DerivedOp::Cap);
        let elapsed = start.elapsed();
        let n = e.algebra.size();
        let matching = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| printed[x][y] == derived[x][y])
            .count();
        ensure(n * n == cells, format!("{id}: {} cells, expected {cells}", n * n))?;
        ensure(matching == cells, format!("{id}: {matching}/{cells} cells match"))?;
        ensure(elapsed < GOLDEN_BUDGET, format!("{id}: {elapsed:?} over budget"))?;
        parts.push(format!("{id} {matching}/{cells} in {elapsed:?}"));
    }
    Ok(parts.join(", "))
}

fn classification() -> Outcome {
    let start = Instant::now();
    let e14 = load_example("E4.14").map_err(|e| e.to_string())?.algebra;
    let r = classify(&e14, "E4.14").map_err(|e| e.to_string())?;
    for c in [ClassId::Ioml, ClassId::Qw, ClassId::PreW, ClassId::MetaW] {
        ensure(r.member(c), format!("E4.14 not in {}", c.id()))?;
    }
    ensure(!r.member(ClassId::Imod), "E4.14 in IMOD")?;
    let w = r.axiom("Imod").and_then(|c| c.witness.as_ref()).ok_or("E4.14: no Imod witness")?;
    let shown = w.render(&e14);
    ensure(shown == "x=a, y=c, z=e", format!("E4.14 Imod witness {shown}"))?;

    let e22 = load_example("E4.22").map_err(|e| e.to_string())?.algebra;
    let r = classify(&e22, "E4.22").map_err(|e| e.to_string())?;
    ensure(r.member(ClassId::Imod), "E4.22 not in IMOD")?;

    let e15 = load_example("E5.15").map_err(|e| e.to_string())?.algebra;
    let r = classify(&e15, "E5.15").map_err(|e| e.to_string())?;
    ensure(r.member(ClassId::Iomwl) && r.member(ClassId::Qw), "E5.15 not in IOMWL and QW")?;
    ensure(!r.member(ClassId::Iol), "E5.15 in IOL")?;
    let w = r.axiom("Impl").and_then(|c| c.witness.as_ref()).ok_or("E5.15: no Impl witness")?;
    let shown15 = w.render(&e15);
    ensure(shown15 == "x=b, y=0", format!("E5.15 Impl witness {shown15}"))?;

    let elapsed = start.elapsed();
    ensure(elapsed < CLASSIFY_BUDGET, format!("{elapsed:?} over budget"))?;
    Ok(format!("witnesses ({shown}) and ({shown15}) in {elapsed:?}"))
}

fn small_universe() -> Result<Vec<(String, InvolutiveAlgebra)>, String> {
    VerifyTask::new(4).universe().map_err(|e| e.to_string())
}

fn metatheorems() -> Outcome {
    let start = Instant::now();
    let universe = small_universe()?;
    let named: Vec<_> = universe.iter().map(|(n, a)| (n.clone(), a)).collect();
    let all = theorems();
    let ids: BTreeSet<&str> = all.iter().map(|t| t.id.as_str()).collect();
    for required in [
        "T4.12", "T5.6", "T5.7", "T5.12", "T4.18", "P3.5", "P3.6", "P5.4", "P5.11", "C3.4", "L3.2",
        "L4.3", "R4.16",
    ] {
        ensure(ids.contains(required), format!("{required} not registered"))?;
    }
    for rel in ioml::classify::relations() {
        ensure(ids.contains(rel.id().as_str()), format!("{} not registered", rel.id()))?;
    }
    let mut violations = 0;
    for t in &all {
        let r = verify_on(&named, t).map_err(|e| e.to_string())?;
        violations += r.violations.len();
    }
    let elapsed = start.elapsed();
    ensure(violations == 0, format!("{violations} violations"))?;
    ensure(elapsed < METATHEOREM_BUDGET, format!("{elapsed:?} over budget"))?;
    Ok(format!(
        "{} theorems on {} models, 0 violations in {elapsed:?}",
        all.len(),
        universe.len()
    ))
}

fn enumeration() -> Outcome {
    let count = |n: usize| enumerate_models(&EnumerationTask::new(n)).map(|e| e.models.len());
    let two = count(2).map_err(|e| e.to_string())?;
    ensure(two == 1, format!("size 2 gives {two}"))?;
    let three = count(3).map_err(|e| e.to_string())?;
    let reference: BTreeSet<_> = common::oracle(3).iter().map(|t| common::oracle_canonical(3, t)).collect();
    ensure(three == reference.len(), format!("size 3 gives {three}, oracle {}", reference.len()))?;

    let start = Instant::now();
    let eight = enumerate_models(&EnumerationTask::new(5).workers(8)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let one = enumerate_models(&EnumerationTask::new(5).workers(1)).map_err(|e| e.to_string())?;
    ensure(elapsed < ENUMERATION_BUDGET, format!("size 5 took {elapsed:?}"))?;
    let (d8, d1) = (write_dump(&eight), write_dump(&one));
    ensure(d8 == d1, "size 5 dumps differ between 1 and 8 workers")?;
    Ok(format!(
        "size 2: 1, size 3: {three} (oracle {}), size 5: {} models in {elapsed:?}, dumps identical ({} bytes)",
        reference.len(),
        eight.models.len(),
        d8.len()
    ))
}

fn holds(i: &(impl ioml::term::Interpretation + ?Sized), id: &str) -> Result<bool, String> {
    check_axiom(i, id).map(|r| r.holds).map_err(|e| e.to_string())
}

fn transforms() -> Outcome {
    let universe = small_universe()?;
    let mut disagreements = Vec::new();
    let mut implicative = 0;
    for (name, a) in &universe {
        let p = be_to_product(a).map_err(|e| format!("{name}: {e}"))?;
        let back = product_to_be(&p).map_err(|e| format!("{name}: {e}"))?;
        if &back != a || be_to_product(&back).map_err(|e| e.to_string())? != p {
            disagreements.push(format!("{name}: product round trip"));
        }
        if !holds(a, "Impl")? {
            continue;
        }
        implicative += 1;
        let l = iol_to_lattice(a).map_err(|e| format!("{name}: {e}"))?;
        let lattice = check_lattice_axioms(&l, &ORTHOLATTICE_AXIOMS).map_err(|e| e.to_string())?;
        if !lattice.iter().all(|r| r.holds) {
            disagreements.push(format!("{name}: L1-L9"));
        }
        if holds(a, "QW2")? != holds(&l, "OM")? {
            disagreements.push(format!("{name}: QW2 vs OM"));
        }
        let imod = holds(a, "Imod")?;
        if imod != holds(&l, "Wmod")? || imod != holds(&p, "Pmod")? {
            disagreements.push(format!("{name}: Imod vs Wmod/Pmod"));
        }
    }
    ensure(disagreements.is_empty(), disagreements.join("; "))?;
    Ok(format!(
        "{} models round-tripped, {implicative} implicative, 0 disagreements",
        universe.len()
    ))
}

fn identity_suites() -> Outcome {
    let mut universe: Vec<(String, InvolutiveAlgebra)> =
        load_all().into_iter().map(|e| (e.id, e.algebra)).collect();
    for n in 1..=4 {
        let e = enumerate_models(&EnumerationTask::new(n)).map_err(|e| e.to_string())?;
        universe.extend(e.models.into_iter().map(|m| (m.name, m.algebra)));
    }
    let expected = [
        ("be-basics", 9),
        ("quantum-order", 10),
        ("cancellation", 10),
        ("implicative", 5),
        ("iom-order", 4),
        ("iom-identities", 4),
        ("qw2-identities", 7),
        ("qw2-iabs-identities", 6),
    ];
    let mut runs = 0;
    for (id, items) in expected {
        let suite = builtin().suite(id).ok_or(format!("{id} missing"))?;
        // numbered items, with lettered sub-items counted once
        let numbered: BTreeSet<&str> = suite
            .items
            .iter()
            .map(|i| i.label.trim_end_matches(|c: char| c.is_ascii_alphabetic()))
            .collect();
        ensure(numbered.len() == items, format!("{id} has {} items", numbered.len()))?;
    }
    let mut failures = Vec::new();
    for suite in builtin().suites() {
        for (name, a) in &universe {
            let r = run_identity_suite(a, &suite.id).map_err(|e| e.to_string())?;
            if r.applicable {
                runs += 1;
                failures.extend(r.failures().map(|f| format!("{}/{} on {name}", suite.id, f.label)));
            }
        }
    }
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(format!(
        "{} suites, {runs} applicable runs on {} models, 0 failures",
        builtin().suites().len(),
        universe.len()
    ))
}

/// Deterministic term generator, depth at most `depth`.
struct Gen(u64);

impl Gen {
    fn next(&mut self, bound: u64) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 33) % bound
    }

    fn term(&mut self, depth: usize) -> Term {
        const VARS: [&str; 4] = ["x", "y", "z", "u"];
        if depth == 0 || self.next(4) == 0 {
            return match self.next(6) {
                0 => Term::one(),
                1 => Term::zero(),
                k => Term::var(VARS[k as usize - 2]),
            };
        }
        match self.next(5) {
            0 => self.term(depth - 1).star(),
            _ => {
                let op = BinOp::ALL[self.next(BinOp::ALL.len() as u64) as usize];
                Term::bin(op, self.term(depth - 1), self.term(depth - 1))
            }
        }
    }
}

fn parser() -> Outcome {
    let mut catalog = 0;
    for a in builtin().axioms() {
        let again = parse_formula(&a.formula.to_string()).map_err(|e| format!("{}: {e}", a.id))?;
        ensure(again == a.formula, format!("{} does not round-trip", a.id))?;
        catalog += 1;
    }
    let mut g = Gen(1);
    let mut deepest = 0;
    for i in 0..GENERATED_ASTS {
        let t = g.term(MAX_AST_DEPTH);
        ensure(t.depth() <= MAX_AST_DEPTH, "generator exceeded depth")?;
        deepest = deepest.max(t.depth());
        let again = parse_term(&t.to_string()).map_err(|e| format!("ast {i}: {e}"))?;
        ensure(again == t, format!("ast {i} `{t}` does not round-trip"))?;
    }
    Ok(format!(
        "{catalog}/{catalog} catalog formulas, {GENERATED_ASTS}/{GENERATED_ASTS} generated terms (max depth {deepest})"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden tables", golden_tables),
        ("classification fidelity", classification),
        ("metatheorem suite", metatheorems),
        ("enumeration correctness", enumeration),
        ("transform round-trips", transforms),
        ("identity suites", identity_suites),
        ("parser round-trip", parser),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
