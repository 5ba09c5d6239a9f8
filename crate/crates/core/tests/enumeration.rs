use std::collections::BTreeSet;

use ioml::algebra::InvolutiveAlgebra;
use ioml::corpus::{load_all, load_example};
use ioml::enumerate::{canonical_form, enumerate_models, write_dump, EnumerationTask, Filter};
use ioml::classify::ClassId;
use ioml::text::parse_documents;
use proptest::prelude::*;

mod common;
use common::{oracle, oracle_canonical, Table};

fn flat(a: &InvolutiveAlgebra) -> Table {
    let n = a.size();
    (0..n * n).map(|i| a.arrow(i / n, i % n)).collect()
}

#[test]
fn size_two_has_one_model() {
    let e = enumerate_models(&EnumerationTask::new(2)).unwrap();
    assert_eq!(e.models.len(), 1);
    assert_eq!(flat(&e.models[0].algebra), [1, 1, 0, 1]);
}

#[test]
fn labeled_output_matches_the_oracle() {
    for n in [3, 4] {
        let expected: BTreeSet<Table> = oracle(n).into_iter().collect();
        let got: BTreeSet<Table> = enumerate_models(&EnumerationTask::new(n).labeled())
            .unwrap()
            .models
            .iter()
            .map(|m| flat(&m.algebra))
            .collect();
        assert_eq!(got, expected, "size {n}");
    }
}

#[test]
fn isomorphism_classes_match_the_oracle() {
    for n in [3, 4] {
        let expected: BTreeSet<Table> = oracle(n).iter().map(|t| oracle_canonical(n, t)).collect();
        let e = enumerate_models(&EnumerationTask::new(n)).unwrap();
        let got: Vec<Table> = e.models.iter().map(|m| flat(&m.algebra)).collect();
        assert_eq!(got.len(), expected.len(), "size {n}");
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), expected);
        for m in &e.models {
            let c: Vec<usize> = m.canonical.0.iter().map(|&b| b as usize).collect();
            assert_eq!(c, flat(&m.algebra));
        }
    }
}

#[test]
fn output_is_sorted_and_pairwise_non_isomorphic() {
    for n in 1..=5 {
        let e = enumerate_models(&EnumerationTask::new(n)).unwrap();
        let forms: Vec<_> = e.models.iter().map(|m| m.canonical.clone()).collect();
        assert!(forms.windows(2).all(|w| w[0] < w[1]), "size {n}");
        for m in &e.models {
            assert_eq!(canonical_form(&m.algebra), m.canonical);
        }
    }
}

#[test]
fn worker_count_does_not_change_the_dump() {
    for n in [4, 5, 6] {
        let one = write_dump(&enumerate_models(&EnumerationTask::new(n).workers(1)).unwrap());
        let eight = write_dump(&enumerate_models(&EnumerationTask::new(n).workers(8)).unwrap());
        assert_eq!(one, eight, "size {n}");
    }
}

#[test]
fn dumps_reparse_into_valid_algebras() {
    let e = enumerate_models(&EnumerationTask::new(5)).unwrap();
    let docs = parse_documents(&write_dump(&e)).unwrap();
    assert_eq!(docs.len(), e.models.len());
    for (doc, m) in docs.iter().zip(&e.models) {
        let a = doc.to_algebra().unwrap().into_involutive().unwrap();
        assert_eq!(a, m.algebra);
        assert_eq!(doc.name(), Some(m.name.as_str()));
    }
}

#[test]
fn filters_restrict_to_members() {
    let all = enumerate_models(&EnumerationTask::new(6)).unwrap();
    let filter = Filter {
        classes: vec![ClassId::Ioml],
        axioms: vec![],
    };
    let e = enumerate_models(&EnumerationTask::new(6).filter(filter)).unwrap();
    assert_eq!(e.unfiltered, all.models.len());
    assert!(!e.models.is_empty() && e.models.len() < all.models.len());
    for m in &e.models {
        let r = ioml::classify::classify(&m.algebra, &m.name).unwrap();
        assert!(r.member(ClassId::Ioml));
    }
}

#[test]
fn relabeled_example_has_the_same_form() {
    // swap a and c (indices 1 and 3), which is not an automorphism
    let e = load_example("E4.22").unwrap().algebra;
    let swap = |x: usize| match x {
        1 => 3,
        3 => 1,
        x => x,
    };
    let n = e.size();
    let mut rows = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            rows[swap(x)][swap(y)] = swap(e.arrow(x, y));
        }
    }
    let names: Vec<String> = (0..n).map(|x| e.name(swap(x)).to_string()).collect();
    let r = InvolutiveAlgebra::new(&rows, e.one(), e.zero(), Some(names)).unwrap();
    assert_ne!(flat(&r), flat(&e));
    assert_eq!(canonical_form(&r), canonical_form(&e));
    assert_ne!(
        canonical_form(&e),
        canonical_form(&load_example("E5.15").unwrap().algebra)
    );
}

#[test]
fn every_six_element_example_appears_in_the_enumeration() {
    let e = enumerate_models(&EnumerationTask::new(6)).unwrap();
    for id in ["E4.22", "E5.15"] {
        let f = canonical_form(&load_example(id).unwrap().algebra);
        assert!(e.models.iter().any(|m| m.canonical == f), "{id}");
    }
}

fn relabel(a: &InvolutiveAlgebra, perm: &[usize]) -> InvolutiveAlgebra {
    let n = a.size();
    let mut rows = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            rows[perm[x]][perm[y]] = perm[a.arrow(x, y)];
        }
    }
    InvolutiveAlgebra::new(&rows, perm[a.one()], perm[a.zero()], None).unwrap()
}

fn corpus_and_small_models() -> Vec<InvolutiveAlgebra> {
    let mut v: Vec<InvolutiveAlgebra> = load_all().into_iter().map(|e| e.algebra).collect();
    for n in 1..=5 {
        v.extend(enumerate_models(&EnumerationTask::new(n)).unwrap().models.into_iter().map(|m| m.algebra));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Any bijection of the carrier (constants move with it) preserves the form.
    #[test]
    fn canonical_form_ignores_relabeling(pick in 0usize..1000, seed in any::<u64>()) {
        let models = corpus_and_small_models();
        let a = &models[pick % models.len()];
        let n = a.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&relabel(a, &perm)), canonical_form(a));
    }
}

/// Automorphisms fixing 0 and 1, by trying every permutation of the rest.
fn automorphisms(a: &InvolutiveAlgebra) -> usize {
    let n = a.size();
    let (zero, one) = (a.zero(), a.one());
    let middle: Vec<usize> = (0..n).filter(|&x| x != zero && x != one).collect();
    let mut count = 0;
    let mut image = middle.clone();
    loop {
        let mut p: Vec<usize> = (0..n).collect();
        for (&from, &to) in middle.iter().zip(&image) {
            p[from] = to;
        }
        if (0..n).all(|x| (0..n).all(|y| p[a.arrow(x, y)] == a.arrow(p[x], p[y]))) {
            count += 1;
        }
        // next permutation of `image`
        let Some(i) = (1..image.len()).rev().find(|&i| image[i - 1] < image[i]) else {
            break;
        };
        let j = (i..image.len()).rev().find(|&j| image[j] > image[i - 1]).unwrap();
        image.swap(i - 1, j);
        image[i..].reverse();
    }
    count
}

#[test]
fn labeled_counts_agree_with_orbit_sizes() {
    for n in 2..=6 {
        let iso = enumerate_models(&EnumerationTask::new(n)).unwrap();
        let labeled = enumerate_models(&EnumerationTask::new(n).labeled()).unwrap();
        let fact: usize = (1..=n - 2).product();
        let orbits: usize = iso.models.iter().map(|m| fact / automorphisms(&m.algebra)).sum();
        assert_eq!(labeled.models.len(), orbits, "size {n}");
    }
}
