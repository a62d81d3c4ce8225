mod common;

use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;

use dpw_core::roots::root_system;
use dpw_core::strata::StratumRecord;
use dpw_core::{census, count_strata, enumerate_eckardt_triples, enumerate_strata, StratumLabel, StratumType};

/// Unordered sets of `k` pairwise orthogonal positive roots, by brute force.
fn orthogonal_sets(k: usize) -> usize {
    let pos: Vec<Vec<i64>> = common::roots(6).into_iter().filter(|r| r > &r.iter().map(|x| -x).collect::<Vec<_>>()).collect();
    fn go(pos: &[Vec<i64>], start: usize, acc: &mut Vec<usize>, k: usize) -> usize {
        if acc.len() == k {
            return 1;
        }
        let mut total = 0;
        for i in start..pos.len() {
            if acc.iter().all(|&j| common::form(&pos[i], &pos[j]) == 0) {
                acc.push(i);
                total += go(pos, i + 1, acc, k);
                acc.pop();
            }
        }
        total
    }
    go(&pos, 0, &mut vec![], k)
}

#[test]
fn a_strata_match_orthogonal_root_sets() {
    for (label, k) in [("a", 1), ("a2", 2), ("a3", 3), ("a4", 4)] {
        assert_eq!(count_strata(&label.parse().unwrap()).unwrap(), orthogonal_sets(k), "{label}");
    }
}

#[test]
fn census_counts() {
    let want: BTreeMap<&str, usize> = BTreeMap::from([
        ("interior", 1),
        ("a", 36),
        ("a2", 270),
        ("a3", 540),
        ("a4", 135),
        ("b", 40),
        ("a2a3", 1620),
        ("a2a4", 810),
        ("a2b", 1080),
        ("a3a4", 540),
        ("a3b", 1080),
        ("aa2", 540),
        ("aa3", 1620),
        ("aa4", 540),
        ("ab", 360),
        ("a2a3a4", 1620),
        ("a2a3b", 3240),
        ("aa2a3", 3240),
        ("aa2a4", 1620),
        ("aa2b", 2160),
        ("aa3a4", 1620),
        ("aa3b", 3240),
        ("aa2a3a4", 3240),
        ("aa2a3b", 6480),
    ]);
    let got: BTreeMap<String, usize> = census().unwrap().into_iter().map(|r| (r.type_string, r.count)).collect();
    assert_eq!(got, want.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
}

#[test]
fn labels_parse() {
    for s in ["a", "a_2", "a₄", "aa2a3b", "b"] {
        assert!(s.parse::<StratumType>().is_ok(), "{s}");
    }
    for s in ["", "ba", "a2a", "a5", "c", "bb"] {
        assert!(s.parse::<StratumType>().is_err(), "{s}");
    }
}

#[test]
fn eckardt_triples() {
    let t = enumerate_eckardt_triples().unwrap();
    assert_eq!(t.len(), 45);
    for [a, b, c] in &t {
        assert_eq!(a.pairing(b).unwrap(), 0);
        assert_eq!(b.pairing(c).unwrap(), 0);
        assert_eq!(a.pairing(c).unwrap(), 0);
    }
}

#[test]
fn records_round_trip() {
    for ty in StratumType::all() {
        for s in enumerate_strata(&ty).unwrap().iter().take(25) {
            let rec = s.to_record();
            let text = serde_json::to_string(&rec).unwrap();
            let back: StratumRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(StratumLabel::try_from(&back).unwrap(), *s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strata_are_weyl_invariant(t in 0usize..23, idx in 0usize..10_000, word in prop::collection::vec(0usize..6, 1..5)) {
        let types = StratumType::all();
        let strata = enumerate_strata(&types[t % types.len()]).unwrap();
        let set: HashSet<&StratumLabel> = strata.iter().collect();
        let gens = root_system(6).unwrap().simple_reflections();
        let mut s = strata[idx % strata.len()].clone();
        for w in word {
            s = s.reflect_by_index(gens[w]);
            prop_assert!(set.contains(&s));
        }
    }
}
