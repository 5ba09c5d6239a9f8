//! Exhaustive search for involutive BE algebras of a fixed size.
//!
//! Elements are laid out with `0` at index 0 and `1` at the last index. The
//! search first fixes the negation `*` (an involution swapping `0` and `1`),
//! which determines the whole `x -> 0` column together with every cell
//! forced by the BE axioms. The remaining cells `x -> y` with `x`, `y`
//! distinct and outside `{0, 1}` are filled depth-first. Each assignment
//! also fixes its contrapositive cell `y* -> x*`, and partial tables are
//! rejected as soon as some fully known instance of the exchange law fails.
//!
//! Modulo isomorphism a complete table is kept only if it is its own
//! canonical form, so each class is produced exactly once no matter how
//! work is split between threads.

mod canonical;
mod theorems;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{default_names, Element, InvolutiveAlgebra};
use crate::axioms::{self, CheckError};
use crate::classify::ClassId;
use crate::text::{write_header, write_table};

pub use canonical::{canonical_form, layout_permutation, CanonicalForm};
pub use theorems::{
    theorem, theorems, verify_metatheorem, verify_on, Statement, Theorem, TheoremReport,
    VerifyError, Violation, VerifyTask,
};

pub const DEFAULT_SIZE_CAP: usize = 6;

const UNSET: u8 = u8::MAX;

/// Restricts output to models satisfying every listed class and axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filter {
    pub classes: Vec<ClassId>,
    pub axioms: Vec<String>,
}

impl Filter {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.axioms.is_empty()
    }

    fn axiom_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .classes
            .iter()
            .flat_map(|c| c.axioms().iter().copied())
            .chain(self.axioms.iter().map(String::as_str))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn accepts(&self, a: &InvolutiveAlgebra) -> Result<bool, CheckError> {
        let cat = axioms::builtin();
        for id in self.axiom_ids() {
            if !cat.check(a, id)?.holds {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub size: usize,
    pub filter: Filter,
    pub modulo_iso: bool,
    /// Worker threads; the output does not depend on it.
    pub workers: usize,
    pub size_cap: usize,
    /// Refuse (rather than truncate) when the search needs more nodes.
    pub node_budget: Option<u64>,
}

impl EnumerationTask {
    /// Isomorphism-free, unfiltered, single-threaded.
    pub fn new(size: usize) -> EnumerationTask {
        EnumerationTask {
            size,
            filter: Filter::default(),
            modulo_iso: true,
            workers: 1,
            size_cap: DEFAULT_SIZE_CAP,
            node_budget: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn labeled(mut self) -> Self {
        self.modulo_iso = false;
        self
    }

    pub fn filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self
    }
}

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("size must be at least 1")]
    Empty,
    #[error("size {size} exceeds the configured cap of {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("search needs more than {0} nodes; refusing to report a partial result")]
    Budget(u64),
    #[error(transparent)]
    Filter(#[from] CheckError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub algebra: InvolutiveAlgebra,
    pub canonical: CanonicalForm,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub size: usize,
    /// Sorted by canonical form, then by table.
    pub models: Vec<Model>,
    /// Models found before filtering.
    pub unfiltered: usize,
    /// Search tree nodes visited.
    pub nodes: u64,
}

/// All involutions of `1..n-1` extended by `0 <-> n-1`, in a fixed order.
fn involutions(n: usize) -> Vec<Vec<u8>> {
    fn go(rest: &[usize], sigma: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(sigma.clone());
            return;
        };
        sigma[first] = first as u8;
        go(tail, sigma, out);
        for (i, &partner) in tail.iter().enumerate() {
            sigma[first] = partner as u8;
            sigma[partner] = first as u8;
            let remaining: Vec<usize> = tail
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            go(&remaining, sigma, out);
        }
    }
    let mut sigma = vec![0u8; n];
    sigma[0] = (n - 1) as u8;
    sigma[n - 1] = 0;
    let middle: Vec<usize> = (1..n - 1).collect();
    let mut out = Vec::new();
    go(&middle, &mut sigma, &mut out);
    out
}

/// Initial table for an involution: every forced cell set, the rest unset.
fn seed(n: usize, sigma: &[u8]) -> Vec<u8> {
    let one = (n - 1) as u8;
    let mut t = vec![UNSET; n * n];
    for x in 0..n {
        t[x * n + x] = one;
        t[x * n + n - 1] = one;
        t[(n - 1) * n + x] = x as u8;
        t[x] = one;
        t[x * n] = sigma[x];
    }
    t
}

fn free_cells(n: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for x in 1..n.saturating_sub(1) {
        for y in 1..n - 1 {
            if x != y {
                cells.push((x, y));
            }
        }
    }
    cells
}

/// Whether every fully determined instance of the exchange law holds.
fn exchange_consistent(n: usize, t: &[u8]) -> bool {
    for y in 0..n {
        for z in 0..n {
            let u = t[y * n + z];
            if u == UNSET {
                continue;
            }
            for x in 0..n {
                let v = t[x * n + z];
                if v == UNSET {
                    continue;
                }
                let (l, r) = (t[x * n + u as usize], t[y * n + v as usize]);
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'a> {
    n: usize,
    sigma: &'a [u8],
    cells: &'a [(usize, usize)],
    modulo_iso: bool,
    t: Vec<u8>,
    found: Vec<Vec<u8>>,
    nodes: u64,
    pending: u64,
    shared: &'a Progress,
}

struct Progress {
    nodes: AtomicU64,
    budget: Option<u64>,
    exceeded: AtomicBool,
}

impl Search<'_> {
    /// Sets a cell and its contrapositive partner. Returns the cells written,
    /// or `None` if the partner already holds a different value.
    fn assign(&mut self, (x, y): (usize, usize), v: u8) -> Option<[usize; 2]> {
        let n = self.n;
        let i = x * n + y;
        let j = self.sigma[y] as usize * n + self.sigma[x] as usize;
        match self.t[j] {
            UNSET => {
                self.t[i] = v;
                self.t[j] = v;
                Some([i, j])
            }
            w if w == v => {
                self.t[i] = v;
                Some([i, i])
            }
            _ => None,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.pending += 1;
        if self.pending == 4096 {
            self.flush();
        }
        !self.shared.exceeded.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if self.shared.budget.is_some_and(|b| total > b) {
            self.shared.exceeded.store(true, Ordering::Relaxed);
        }
    }

    fn run(&mut self, from: usize) {
        if !self.tick() {
            return;
        }
        let Some(k) = (from..self.cells.len()).find(|&k| {
            let (x, y) = self.cells[k];
            self.t[x * self.n + y] == UNSET
        }) else {
            if !self.modulo_iso || canonical::is_canonical(self.n, &self.t) {
                self.found.push(self.t.clone());
            }
            return;
        };
        for v in 0..self.n as u8 {
            if let Some(written) = self.assign(self.cells[k], v) {
                if exchange_consistent(self.n, &self.t) {
                    self.run(k + 1);
                }
                for w in written {
                    self.t[w] = UNSET;
                }
            }
        }
    }
}

fn build_model(n: usize, t: &[u8], canonical: CanonicalForm) -> Model {
    let rows: Vec<Vec<Element>> = (0..n)
        .map(|x| (0..n).map(|y| t[x * n + y] as Element).collect())
        .collect();
    let one = n - 1;
    let algebra = InvolutiveAlgebra::new(&rows, one, 0, Some(default_names(n, one, 0)))
        .expect("enumerated tables satisfy the axioms they were searched under");
    Model {
        name: String::new(),
        algebra,
        canonical,
    }
}

pub fn enumerate_models(task: &EnumerationTask) -> Result<Enumeration, EnumerateError> {
    let n = task.size;
    if n == 0 {
        return Err(EnumerateError::Empty);
    }
    if n > task.size_cap {
        return Err(EnumerateError::OverCap {
            size: n,
            cap: task.size_cap,
        });
    }
    if n == 1 {
        let m = build_model(1, &[0], CanonicalForm(vec![0]));
        return finish(task, vec![m], 1);
    }

    let cells = free_cells(n);
    let sigmas = involutions(n);
    // Work units: one per involution and value of the first free cell.
    let first_values: Vec<Option<u8>> = if cells.is_empty() {
        vec![None]
    } else {
        (0..n as u8).map(Some).collect()
    };
    let units: Vec<(usize, Option<u8>)> = (0..sigmas.len())
        .flat_map(|s| first_values.iter().map(move |v| (s, *v)))
        .collect();
    let shared = Progress {
        nodes: AtomicU64::new(0),
        budget: task.node_budget,
        exceeded: AtomicBool::new(false),
    };
    let run_unit = |&(s, first): &(usize, Option<u8>)| -> (Vec<Vec<u8>>, u64) {
        let sigma = &sigmas[s];
        let mut search = Search {
            n,
            sigma,
            cells: &cells,
            modulo_iso: task.modulo_iso,
            t: seed(n, sigma),
            found: Vec::new(),
            nodes: 0,
            pending: 0,
            shared: &shared,
        };
        match first {
            None => {
                if exchange_consistent(n, &search.t) {
                    search.run(0);
                }
            }
            Some(v) => {
                if search.assign(cells[0], v).is_some() && exchange_consistent(n, &search.t) {
                    search.run(1);
                }
            }
        }
        search.flush();
        (search.found, search.nodes)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(task.workers.max(1))
        .build()
        .map_err(|e| EnumerateError::Pool(e.to_string()))?;
    let results: Vec<(Vec<Vec<u8>>, u64)> = pool.install(|| units.par_iter().map(run_unit).collect());
    if shared.exceeded.load(Ordering::Relaxed) {
        return Err(EnumerateError::Budget(task.node_budget.unwrap_or(0)));
    }
    let nodes = results.iter().map(|(_, k)| k).sum();
    let mut tables: Vec<Vec<u8>> = results.into_iter().flat_map(|(f, _)| f).collect();
    let models: Vec<Model> = pool.install(|| {
        let mut keyed: Vec<(Vec<u8>, Vec<u8>)> = tables
            .par_drain(..)
            .map(|t| {
                let c = if task.modulo_iso {
                    t.clone()
                } else {
                    canonical::canonical_layout(n, &t)
                };
                (c, t)
            })
            .collect();
        keyed.par_sort_unstable();
        keyed
            .into_par_iter()
            .map(|(c, t)| build_model(n, &t, CanonicalForm(c)))
            .collect()
    });
    finish(task, models, nodes)
}

fn finish(task: &EnumerationTask, models: Vec<Model>, nodes: u64) -> Result<Enumeration, EnumerateError> {
    let unfiltered = models.len();
    let mut kept = Vec::new();
    for m in models {
        if task.filter.accepts(&m.algebra)? {
            kept.push(m);
        }
    }
    let width = kept.len().to_string().len().max(4);
    for (i, m) in kept.iter_mut().enumerate() {
        m.name = format!("n{}-{:0width$}", task.size, i + 1);
    }
    Ok(Enumeration {
        size: task.size,
        models: kept,
        unfiltered,
        nodes,
    })
}

/// Concatenated text documents, one per model, each tagged with its
/// canonical form.
pub fn write_dump(e: &Enumeration) -> String {
    let mut out = String::new();
    for (i, m) in e.models.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        out.push_str(&format!("# canonical: {}\n", m.canonical.hex()));
        let a = &m.algebra;
        write_header(&mut out, Some(&m.name), a.names(), a.one(), a.zero());
        write_table(&mut out, "arrow", a.names(), |x, y| a.arrow(x, y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_counts() {
        // involutions of a k-set: 1, 1, 2, 4, 10
        let counts: Vec<usize> = (2..=6).map(|n| involutions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 10]);
        for s in involutions(5) {
            assert!((0..5).all(|x| s[s[x] as usize] as usize == x));
            assert_eq!((s[0], s[4]), (4, 0));
        }
    }

    #[test]
    fn seeds_fix_the_forced_cells() {
        let n = 4;
        let sigma = &involutions(n)[1];
        let t = seed(n, sigma);
        let unset = t.iter().filter(|&&c| c == UNSET).count();
        assert_eq!(unset, free_cells(n).len());
        assert_eq!(unset, (n - 2) * (n - 3));
    }

    #[test]
    fn small_sizes() {
        assert_eq!(enumerate_models(&EnumerationTask::new(1)).unwrap().models.len(), 1);
        let two = enumerate_models(&EnumerationTask::new(2)).unwrap();
        assert_eq!(two.models.len(), 1);
        assert_eq!(two.models[0].algebra.arrow(0, 0), 1);
        assert_eq!(two.models[0].algebra.arrow(1, 0), 0);
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_models(&EnumerationTask::new(0)), Err(EnumerateError::Empty)));
        assert!(matches!(
            enumerate_models(&EnumerationTask::new(7)),
            Err(EnumerateError::OverCap { size: 7, cap: 6 })
        ));
        let mut t = EnumerationTask::new(5);
        t.node_budget = Some(10);
        assert!(matches!(enumerate_models(&t), Err(EnumerateError::Budget(10))));
    }
}
