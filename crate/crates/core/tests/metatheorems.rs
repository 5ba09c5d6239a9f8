use ioml::algebra::{Algebra, AlgebraError, BeAxiom};
use ioml::axioms::{builtin, run_identity_suite};
use ioml::corpus::load_example;
use ioml::enumerate::{theorems, verify_metatheorem, verify_on, VerifyTask};

#[test]
fn corrupted_example_reports_the_first_exchange_failure() {
    let e = load_example("E4.22").unwrap().algebra;
    let n = e.size();
    let (a, c, d) = (e.index_of("a").unwrap(), e.index_of("c").unwrap(), e.index_of("d").unwrap());
    let mut rows: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| e.arrow(x, y)).collect()).collect();
    rows[a][c] = d;

    let t = |x: usize, y: usize| rows[x][y];
    let mut first = None;
    'scan: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if t(x, t(y, z)) != t(y, t(x, z)) {
                    first = Some(vec![x, y, z]);
                    break 'scan;
                }
            }
        }
    }
    let first = first.expect("the corrupted table breaks exchange");

    let Err(AlgebraError::Axioms(report)) = Algebra::new(&rows, e.one(), e.zero(), None) else {
        panic!("corrupted table accepted");
    };
    assert_eq!(report.violation(BeAxiom::Be4).unwrap().witness, first);
}

#[test]
fn every_registered_theorem_holds_up_to_size_five() {
    let task = VerifyTask::new(5);
    let universe = task.universe().unwrap();
    let named: Vec<_> = universe.iter().map(|(n, a)| (n.clone(), a)).collect();
    for t in theorems() {
        let r = verify_on(&named, &t).unwrap();
        assert!(r.holds(), "{}: {:?}", t.id, r.violations);
        assert_eq!(r.models_examined, universe.len());
        assert!(r.instances > 0, "{} is vacuous", t.id);
    }
}

#[test]
fn strict_inclusions_are_separated_by_some_model() {
    let task = VerifyTask::new(6);
    let universe = task.universe().unwrap();
    let named: Vec<_> = universe.iter().map(|(n, a)| (n.clone(), a)).collect();
    for t in theorems() {
        let r = verify_on(&named, &t).unwrap();
        assert!(r.holds(), "{}", t.id);
        if let Some(sep) = r.separating {
            assert!(!sep.is_empty(), "{} has no separating model", t.id);
        }
    }
}

#[test]
fn unknown_theorem_is_an_error() {
    assert!(verify_metatheorem(&VerifyTask::new(2), "T9.99").is_err());
}

#[test]
fn identity_suites_hold_on_small_models() {
    let universe = VerifyTask::new(5).universe().unwrap();
    for s in builtin().suites() {
        let mut applicable = 0;
        for (name, a) in &universe {
            let r = run_identity_suite(a, &s.id).unwrap();
            if r.applicable {
                applicable += 1;
                let failed: Vec<_> = r.failures().map(|i| i.label.clone()).collect();
                assert!(failed.is_empty(), "{} on {name}: {failed:?}", s.id);
            }
        }
        assert!(applicable > 0, "{} never applies", s.id);
    }
}
