mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use dpw_core::{canonical_class, enumerate_lines, enumerate_roots, fmt_q, parse_rational, reflect, LatticeVector, Q};

fn coeff_set(v: &[LatticeVector]) -> BTreeSet<Vec<i64>> {
    v.iter().map(|x| x.coeffs().to_vec()).collect()
}

#[test]
fn roots_match_brute_force() {
    for n in 5..=7 {
        let roots = enumerate_roots(n).unwrap();
        let all = common::roots(n);
        assert_eq!(all.len(), 2 * roots.len(), "n = {n}");
        assert!(coeff_set(&roots).is_subset(&all));
        let negatives: BTreeSet<Vec<i64>> = roots.iter().map(|r| r.coeffs().iter().map(|x| -x).collect()).collect();
        assert!(negatives.is_disjoint(&coeff_set(&roots)));
    }
}

#[test]
fn lines_match_brute_force() {
    for n in 5..=7 {
        assert_eq!(coeff_set(&enumerate_lines(n).unwrap()), common::lines(n), "n = {n}");
    }
}

#[test]
fn rank_limits() {
    assert!(enumerate_roots(4).is_err());
    assert!(enumerate_lines(8).is_err());
    assert!(canonical_class(9).is_err());
}

#[test]
fn decimal_weights_rejected() {
    for s in ["0.5", "1e-1", "", "1/0", "x"] {
        assert!(parse_rational(s).is_err(), "{s}");
    }
    assert_eq!(parse_rational("2/4").unwrap(), Q::new(1, 2));
}

fn root_strategy(n: usize) -> impl Strategy<Value = LatticeVector> {
    let roots = enumerate_roots(n).unwrap();
    (0..roots.len(), any::<bool>()).prop_map(move |(i, neg)| {
        let c: Vec<i64> = roots[i].coeffs().iter().map(|x| if neg { -x } else { *x }).collect();
        LatticeVector::from_coeffs(&c).unwrap()
    })
}

fn vector_strategy(n: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-4i64..=4, n + 1).prop_map(|c| LatticeVector::from_coeffs(&c).unwrap())
}

proptest! {
    #[test]
    fn reflection_is_an_involutive_isometry(
        (a, u, v) in (5usize..=7).prop_flat_map(|n| (root_strategy(n), vector_strategy(n), vector_strategy(n)))
    ) {
        let ru = reflect(&u, &a).unwrap();
        let rv = reflect(&v, &a).unwrap();
        prop_assert_eq!(ru.pairing(&rv).unwrap(), u.pairing(&v).unwrap());
        prop_assert_eq!(reflect(&ru, &a).unwrap(), u);
        let k = canonical_class(a.rank()).unwrap();
        prop_assert_eq!(reflect(&k, &a).unwrap(), k);
    }

    #[test]
    fn reflection_permutes_roots_and_lines((a, n) in (5usize..=7).prop_flat_map(|n| (root_strategy(n), Just(n)))) {
        let lines: BTreeSet<LatticeVector> = enumerate_lines(n).unwrap().into_iter().collect();
        for l in &lines {
            prop_assert!(lines.contains(&reflect(l, &a).unwrap()));
        }
        for r in enumerate_roots(n).unwrap() {
            prop_assert!(reflect(&r, &a).unwrap().is_root());
        }
    }

    #[test]
    fn rational_text_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = Q::new(p, q);
        prop_assert_eq!(parse_rational(&fmt_q(&x)).unwrap(), x);
    }
}
