use fermat_actions::classify::{classify_triples, invariant_set, TripleMode};
use fermat_actions::enumeration::{count_actions, enumerate_actions, ActionParams, DEFAULT_CANDIDATE_CAP};
use fermat_actions::fpalgebra::is_prime;
use fermat_actions::hgroup::{normalizer_in_symmetric, PermGroup, Permutation};
use fermat_actions::predictions::{predicted_invariant_set, predicted_triple_count, FamilyCase};
use fermat_actions::Error;

fn n5(p: u64) -> ActionParams {
    ActionParams::new(p, 5, 2).unwrap()
}

#[test]
fn size_of_f_p52() {
    for (p, size) in [(2, 30), (3, 605), (5, 15915), (7, 123785), (11, 1869429), (13, 5076035)] {
        assert_eq!(count_actions(&n5(p), DEFAULT_CANDIDATE_CAP).unwrap(), size, "p={p}");
    }
}

#[test]
fn dihedral_invariant_sets_and_classes() {
    let q = FamilyCase::N5D3.group();
    for (p, keys, classes) in [(2, 3, 1), (3, 7, 3), (5, 6, 2), (7, 8, 3), (11, 12, 3), (13, 14, 4)] {
        let r = classify_triples(&n5(p), &q, TripleMode::Exhaustive).unwrap();
        assert_eq!((r.key_count(), r.count), (keys, classes), "p={p}");
        assert_eq!(r.group.order(), 36);
    }
}

#[test]
fn klein_invariant_sets_and_classes() {
    let q = FamilyCase::N5K4.group();
    for (p, keys, classes) in [
        (2, 4, 3),
        (3, 13, 7),
        (5, 19, 9),
        (7, 25, 11),
        (11, 37, 15),
        (13, 43, 17),
    ] {
        let r = classify_triples(&n5(p), &q, TripleMode::Exhaustive).unwrap();
        assert_eq!((r.key_count(), r.count), (keys, classes), "p={p}");
        assert_eq!(r.group.order(), 16);
    }
}

#[test]
fn closed_form_triple_counts_match_predicted_mode() {
    for p in (2..=61).filter(|&p| is_prime(p)) {
        for case in [FamilyCase::N5D3, FamilyCase::N5K4] {
            let r = classify_triples(&n5(p), &case.group(), TripleMode::Predicted).unwrap();
            assert_eq!(r.count as u64, predicted_triple_count(case, p).unwrap(), "{case} p={p}");
        }
    }
}

#[test]
fn predicted_families_equal_computed_invariant_sets_for_n3() {
    for p in (3..=113).filter(|&p| is_prime(p)) {
        let keys = enumerate_actions(&ActionParams::new(p, 3, 2).unwrap()).unwrap();
        for case in FamilyCase::ALL.into_iter().filter(|c| c.n() == 3) {
            let computed = invariant_set(&keys, &case.group()).unwrap();
            assert_eq!(predicted_invariant_set(case, p).unwrap(), computed, "{case} p={p}");
        }
    }
}

#[test]
fn predicted_families_equal_computed_invariant_sets_for_n5() {
    for p in [2, 3, 5, 7] {
        let keys = enumerate_actions(&n5(p)).unwrap();
        for case in [FamilyCase::N5D3, FamilyCase::N5K4] {
            let computed = invariant_set(&keys, &case.group()).unwrap();
            assert_eq!(predicted_invariant_set(case, p).unwrap(), computed, "{case} p={p}");
        }
    }
}

#[test]
fn dihedral_normalizer_is_generated_by_extra_elements() {
    let q = FamilyCase::N5D3.group();
    let n = normalizer_in_symmetric(&q).unwrap();
    let mut gens = q.generators().to_vec();
    gens.push(Permutation::parse_cycles("(4 5 6)", 6).unwrap());
    gens.push(Permutation::parse_cycles("(2 3)(5 6)", 6).unwrap());
    assert_eq!(PermGroup::generate(6, &gens).unwrap(), n);
}

#[test]
fn n3_normalizer_orders() {
    let expected = [
        (FamilyCase::N3Q1, 4),
        (FamilyCase::N3Q2, 8),
        (FamilyCase::N3Q3, 6),
        (FamilyCase::N3Q4, 8),
        (FamilyCase::N3Q5, 24),
        (FamilyCase::N3Q6, 8),
        (FamilyCase::N3Q7, 8),
        (FamilyCase::N3Q8, 24),
    ];
    for (case, order) in expected {
        assert_eq!(normalizer_in_symmetric(&case.group()).unwrap().order(), order, "{case}");
    }
}

#[test]
fn exhaustive_triples_respect_the_cap() {
    let err = fermat_actions::classify::classify_triples_capped(
        &n5(13),
        &FamilyCase::N5D3.group(),
        TripleMode::Exhaustive,
        1000,
    )
    .unwrap_err();
    assert!(matches!(err, Error::ScaleCap { .. }));
}

#[test]
fn predicted_mode_rejects_unknown_groups() {
    let q = PermGroup::from_cycle_strings(6, &["(1 2)"]).unwrap();
    assert!(matches!(
        classify_triples(&n5(5), &q, TripleMode::Predicted),
        Err(Error::Unsupported(_))
    ));
}
