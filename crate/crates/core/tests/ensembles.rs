mod common;

use std::collections::BTreeMap;

use dycktri::constructors::{dyck, extended_dyck, rational_dyck, staircase};
use dycktri::ensembles::{
    check_axioms, dyck_ensemble, dyck_matching, ensemble_from_triangulation, extended_dyck_ensemble,
    extended_dyck_matching, subsets, support_pairs, triangulation_from_ensemble, Matching, MatchingEnsemble,
};
use dycktri::regularity::{random_regular_triangulation, Heights};
use dycktri::{Error, Support, Vertex};
use proptest::prelude::*;

use common::{cheapest, powers};

#[test]
fn round_trips_on_the_catalogue() {
    let mut catalogue = Vec::new();
    for m in 1..=4 {
        for n in 1..=4 {
            catalogue.push(staircase(m, n).unwrap());
        }
    }
    catalogue.extend((1..=4).map(|n| dyck(n).unwrap()));
    catalogue.extend((1..=3).map(|n| extended_dyck(n).unwrap()));
    catalogue.push(rational_dyck(2, 2).unwrap());
    for t in catalogue {
        let e = ensemble_from_triangulation(&t).unwrap();
        assert!(check_axioms(&e).passes());
        assert_eq!(triangulation_from_ensemble(&e).unwrap(), t);
    }
}

#[test]
fn rotation_rule_reproduces_the_dyck_ensembles() {
    for n in 1..=5 {
        assert_eq!(dyck_ensemble(n).unwrap(), ensemble_from_triangulation(&dyck(n).unwrap()).unwrap());
    }
    for n in 1..=4 {
        assert_eq!(
            extended_dyck_ensemble(n).unwrap(),
            ensemble_from_triangulation(&extended_dyck(n).unwrap()).unwrap()
        );
    }
}

#[test]
fn rotation_rule_picks_the_cheapest_matching() {
    // Heights c^{(j − i) mod n} with a concrete large c: the rotation rule
    // must pick the unique cheapest bijection on every support.
    for n in 1..=4 {
        let exponents: BTreeMap<Vertex, u32> =
            Support::full(n, n).vertices().map(|v| (v, ((v.col + n - v.row) % n) as u32)).collect();
        let h = powers(&exponents, (n * n + 2) as i64);
        for key in support_pairs(&Support::full(n, n)) {
            let best = cheapest(&key.rows, &key.cols, &h);
            assert_eq!(best.len(), 1, "tie on {key}");
            let expected = Matching::new(best[0].clone()).unwrap();
            assert_eq!(dyck_matching(&key.rows, &key.cols).unwrap(), expected, "support {key}");
        }
    }
}

#[test]
fn extended_rotation_rule_picks_the_cheapest_matching() {
    for n in 1..=4 {
        let exponents: BTreeMap<Vertex, u32> = Support::full(n + 1, n)
            .vertices()
            .map(|v| {
                let e = if v.row == n + 1 {
                    0
                } else if v.col >= v.row {
                    v.col - v.row
                } else {
                    n + v.col - v.row
                };
                (v, e as u32)
            })
            .collect();
        let h = powers(&exponents, ((n + 1) * n + 2) as i64);
        for key in support_pairs(&Support::full(n + 1, n)) {
            let best = cheapest(&key.rows, &key.cols, &h);
            assert_eq!(best.len(), 1, "tie on {key}");
            assert_eq!(
                extended_dyck_matching(n, &key.rows, &key.cols).unwrap(),
                Matching::new(best[0].clone()).unwrap()
            );
        }
    }
}

#[test]
fn rotation_rule_examples() {
    let m = dyck_matching(&[1, 2, 5], &[2, 4, 5]).unwrap();
    assert_eq!(m, Matching::from_pairs([(1, 2), (2, 4), (5, 5)]).unwrap());
    let m = dyck_matching(&[4, 5, 8], &[2, 5, 7]).unwrap();
    assert_eq!(m, Matching::from_pairs([(4, 5), (5, 7), (8, 2)]).unwrap());
    let m = extended_dyck_matching(7, &[1, 5, 6, 8], &[3, 4, 5, 7]).unwrap();
    assert_eq!(m, Matching::from_pairs([(1, 3), (5, 5), (6, 7), (8, 4)]).unwrap());
    assert!(dyck_matching(&[1, 2], &[1]).is_err());
}

#[test]
fn conflicting_matchings_are_rejected() {
    let mut e = MatchingEnsemble::empty(Support::full(2, 2));
    e.insert(Matching::from_pairs([(1, 1), (2, 2)]).unwrap()).unwrap();
    let err = e.insert(Matching::from_pairs([(1, 2), (2, 1)]).unwrap()).unwrap_err();
    assert!(matches!(err, Error::SupportConflict { .. }));
}

#[test]
fn la_failure_is_reported() {
    // The three square matchings of the cyclic tournament, completed with all
    // single edges, violate linkage at the third row.
    let mut e = MatchingEnsemble::empty(Support::full(3, 2));
    for v in Support::full(3, 2).vertices() {
        e.insert(Matching::new([v]).unwrap()).unwrap();
    }
    for pairs in [[(1, 1), (2, 2)], [(2, 1), (3, 2)], [(3, 1), (1, 2)]] {
        e.insert(Matching::from_pairs(pairs).unwrap()).unwrap();
    }
    let report = check_axioms(&e);
    assert!(report.sa.is_none() && report.ca.is_none());
    let la = report.la.unwrap();
    assert_eq!(la.matching, Matching::from_pairs([(1, 1), (2, 2)]).unwrap());
    assert!(matches!(triangulation_from_ensemble(&e), Err(Error::AxiomFailure(_))));
}

#[test]
fn ensemble_json_round_trip() {
    for e in [dyck_ensemble(3).unwrap(), extended_dyck_ensemble(2).unwrap()] {
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<MatchingEnsemble>(&text).unwrap(), e);
    }
    let face = ensemble_from_triangulation(&dyck(3).unwrap().restrict(&[1, 2], &[2, 3]).unwrap()).unwrap();
    let text = serde_json::to_string(&face).unwrap();
    assert_eq!(serde_json::from_str::<MatchingEnsemble>(&text).unwrap(), face);
}

#[test]
fn subsets_are_lexicographic() {
    assert_eq!(subsets(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    assert_eq!(subsets(&[1, 2], 0), vec![Vec::<usize>::new()]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_regular_round_trip(m in 1usize..=4, n in 1usize..=4, seed in any::<u64>()) {
        let (t, h) = random_regular_triangulation(m, n, seed).unwrap();
        prop_assert!(t.verify().is_triangulation());
        let e = ensemble_from_triangulation(&t).unwrap();
        prop_assert!(check_axioms(&e).passes());
        prop_assert_eq!(triangulation_from_ensemble(&e).unwrap(), t);
        // Every ensemble matching is the cheapest on its support.
        let Heights::Rational(values) = &h.values else { unreachable!() };
        for (key, matching) in &e.table {
            let best = cheapest(&key.rows, &key.cols, values);
            prop_assert_eq!(best.len(), 1);
            prop_assert_eq!(&Matching::new(best[0].clone()).unwrap(), matching);
        }
    }
}
