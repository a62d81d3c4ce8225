use dpw_core::rational::{fmt_q, q, qi};
use dpw_core::{canonical_form, chamber_model, classify_wall, compute_walls, Error, WallTag};

fn texts(v: &[dpw_core::Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

#[test]
fn wall_sets() {
    assert_eq!(texts(&compute_walls(4).unwrap().walls), ["1/2"]);
    assert_eq!(texts(&compute_walls(3).unwrap().walls), ["2/3", "1/2", "1/3", "1/4", "1/6"]);
    assert!(compute_walls(5).is_err());
}

#[test]
fn wall_kinds() {
    assert_eq!(classify_wall(4, q(1, 2)).unwrap(), WallTag::Isomorphism);
    for (w, tag) in [
        (q(2, 3), WallTag::Isomorphism),
        (q(1, 2), WallTag::Isomorphism),
        (q(1, 3), WallTag::Isomorphism),
        (q(1, 4), WallTag::Contraction),
        (q(1, 6), WallTag::Isomorphism),
    ] {
        assert_eq!(classify_wall(3, w).unwrap(), tag, "{w}");
    }
    assert!(matches!(classify_wall(3, q(1, 5)), Err(Error::UnknownWall(_))));
}

/// Across 1/4 the two X-bearing families become isomorphic.
#[test]
fn contraction_witness() {
    let above = |l| canonical_form(&chamber_model(l, q(2, 7)).unwrap());
    let below = |l| canonical_form(&chamber_model(l, q(1, 5)).unwrap());
    assert_ne!(above("a2"), above("aa2"));
    assert_eq!(below("a2"), below("aa2"));
    let r = compute_walls(3).unwrap();
    let wit = &r.witnesses[&q(1, 4)];
    assert!(wit.contains(&"a2".to_string()) && wit.contains(&"aa2".to_string()));
}

#[test]
fn chambers_tile_the_domain() {
    for degree in [3, 4] {
        let r = compute_walls(degree).unwrap();
        assert_eq!(r.chambers.len(), r.walls.len() + 1);
        assert_eq!(r.chambers[0].interval.hi, qi(1));
        assert!(r.chambers[0].crossing_tag.is_none());
        for pair in r.chambers.windows(2) {
            assert_eq!(pair[0].interval.lo, pair[1].interval.hi);
        }
        let floor = if degree == 3 { q(1, 9) } else { q(1, 4) };
        assert_eq!(r.chambers.last().unwrap().interval.lo, floor);
    }
}

#[test]
fn tier2_families_stop_after_their_first_chamber() {
    let r = compute_walls(3).unwrap();
    assert_eq!(texts(&r.tier2_walls), ["1/2"]);
    assert_eq!(r.chambers[1].models["a3"], 43);
    assert!(!r.chambers[2].models.contains_key("a3"));
    let last = r.chambers.last().unwrap();
    assert!(!last.models.contains_key("a3"));
    assert_eq!(last.models["ab"], 3);
    assert_eq!(last.models["b"], 3);
}

#[test]
fn report_is_deterministic_json() {
    let a = compute_walls(3).unwrap().to_json().unwrap();
    let b = compute_walls(3).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["walls"][3], "1/4");
    assert_eq!(v["chambers"][4]["crossing_tag"], "contraction");
}
