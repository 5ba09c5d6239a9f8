//! Canonical forms under relabelings that fix `0` and `1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, InvolutiveAlgebra};

/// The arrow table, relabeled so that `0` is index 0 and `1` the last index,
/// minimized row-major over all permutations of the remaining elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalForm> {
        if !s.len().is_multiple_of(2) {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalForm)
    }

    /// Number of elements of the algebra it encodes.
    pub fn size(&self) -> usize {
        (self.0.len() as f64).sqrt().round() as usize
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Advances `p` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Compares the relabeling of `t` by `perm` (old index to new index) with
/// `t` itself, row-major.
fn compare_relabeled(n: usize, t: &[u8], perm: &[usize], inv: &[usize]) -> std::cmp::Ordering {
    for u in 0..n {
        for v in 0..n {
            let relabeled = perm[t[inv[u] * n + inv[v]] as usize] as u8;
            let c = relabeled.cmp(&t[u * n + v]);
            if c.is_ne() {
                return c;
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// Calls `f(perm, inverse)` for every permutation fixing the first and last
/// index.
fn for_each_middle_permutation(n: usize, mut f: impl FnMut(&[usize], &[usize]) -> bool) {
    if n <= 2 {
        let id: Vec<usize> = (0..n).collect();
        f(&id, &id);
        return;
    }
    let mut middle: Vec<usize> = (1..n - 1).collect();
    let mut perm = vec![0; n];
    let mut inv = vec![0; n];
    loop {
        perm[0] = 0;
        perm[n - 1] = n - 1;
        perm[1..n - 1].copy_from_slice(&middle);
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        if !f(&perm, &inv) {
            return;
        }
        if !next_permutation(&mut middle) {
            return;
        }
    }
}

/// Whether a table already in layout (zero first, one last) is minimal.
pub(crate) fn is_canonical(n: usize, t: &[u8]) -> bool {
    let mut minimal = true;
    for_each_middle_permutation(n, |perm, inv| {
        if compare_relabeled(n, t, perm, inv).is_lt() {
            minimal = false;
        }
        minimal
    });
    minimal
}

/// Minimal relabeling of a table already in layout.
pub(crate) fn canonical_layout(n: usize, t: &[u8]) -> Vec<u8> {
    let mut best = t.to_vec();
    for_each_middle_permutation(n, |perm, inv| {
        let mut cand = vec![0u8; n * n];
        for u in 0..n {
            for v in 0..n {
                cand[u * n + v] = perm[t[inv[u] * n + inv[v]] as usize] as u8;
            }
        }
        if cand < best {
            best = cand;
        }
        true
    });
    best
}

/// Old index to layout index: zero first, one last, the rest in order.
pub fn layout_permutation(a: &InvolutiveAlgebra) -> Vec<Element> {
    let n = a.size();
    let mut perm = vec![0; n];
    if n == 1 {
        return perm;
    }
    let mut next = 1;
    for (x, slot) in perm.iter_mut().enumerate() {
        *slot = if x == a.zero() {
            0
        } else if x == a.one() {
            n - 1
        } else {
            next += 1;
            next - 1
        };
    }
    perm
}

/// The arrow table of `a` with elements moved into layout order.
pub(crate) fn layout_table(a: &InvolutiveAlgebra) -> Vec<u8> {
    let n = a.size();
    let perm = layout_permutation(a);
    let mut t = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            t[perm[x] * n + perm[y]] = perm[a.arrow(x, y)] as u8;
        }
    }
    t
}

pub fn canonical_form(a: &InvolutiveAlgebra) -> CanonicalForm {
    let n = a.size();
    assert!(n <= u8::MAX as usize, "canonical forms are limited to 255 elements");
    CanonicalForm(canonical_layout(n, &layout_table(a)))
}
