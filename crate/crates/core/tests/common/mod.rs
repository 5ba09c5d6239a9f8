#![allow(dead_code)]

pub type Table = Vec<usize>;

/// Every filling of the cells `x -> y` with `x`, `y` not the top element and
/// `x != y`, kept when the result is a bounded involutive BE algebra with
/// bottom 0 and top n-1.
pub fn oracle(n: usize) -> Vec<Table> {
    let one = n - 1;
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != one && y != one && x != y)
        .collect();
    assert_eq!(cells.len(), (n - 1) * (n - 2));
    let mut base = vec![0; n * n];
    for x in 0..n {
        base[one * n + x] = x;
        base[x * n + one] = one;
        base[x * n + x] = one;
    }
    let mut out = Vec::new();
    let total = n.pow(cells.len() as u32);
    for code in 0..total {
        let mut t = base.clone();
        let mut c = code;
        for &(x, y) in &cells {
            t[x * n + y] = c % n;
            c /= n;
        }
        let a = |x: usize, y: usize| t[x * n + y];
        let bounded = (0..n).all(|x| a(0, x) == one);
        let exchange = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| a(x, a(y, z)) == a(y, a(x, z))))
        });
        let involutive = (0..n).all(|x| a(a(x, 0), 0) == x);
        if bounded && exchange && involutive {
            out.push(t);
        }
    }
    out
}

/// Heap's algorithm over the middle elements; smallest relabeled table.
pub fn oracle_canonical(n: usize, t: &Table) -> Table {
    let mut middle: Vec<usize> = (1..n.saturating_sub(1)).collect();
    let mut best: Option<Table> = None;
    let mut consider = |m: &[usize]| {
        let mut p: Vec<usize> = (0..n).collect();
        for (i, &v) in m.iter().enumerate() {
            p[i + 1] = v;
        }
        let mut r = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                r[p[x] * n + p[y]] = p[t[x * n + y]];
            }
        }
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    };
    let k = middle.len();
    let mut c = vec![0; k];
    consider(&middle);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                middle.swap(0, i);
            } else {
                middle.swap(c[i], i);
            }
            consider(&middle);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best.unwrap()
}
