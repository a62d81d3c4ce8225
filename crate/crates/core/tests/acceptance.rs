//! One PASS/FAIL line per acceptance criterion. All comparisons are exact.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use dpw_core::catalog::chamber_samples;
use dpw_core::rational::{q, qi, Affine};
use dpw_core::roots::{horizontal_root_to_line, horizontal_roots, root_system};
use dpw_core::surface::expected_total_degree;
use dpw_core::walls::{families, sweep};
use dpw_core::{
    apply_x_degeneration, build_fiber, canonical_form, catalog_labels, chamber_model, compute_walls, count_strata,
    enumerate_eckardt_triples, enumerate_lines, enumerate_roots, enumerate_strata, enumerate_vertex_subsystems,
    fmt_q, polarization_restriction, reflect, stable_model, total_degree, FiberComplex, LatticeVector, Role,
    StratumLabel, StratumType, VertexKind, WallTag, Q,
};

type Check = Result<(), String>;
type Named = (&'static str, fn() -> Check);

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn counts() -> Check {
    for (n, roots, lines) in [(5, 20, 16), (6, 36, 27), (7, 63, 56)] {
        eq(&format!("roots n={n}"), enumerate_roots(n).map_err(e)?.len(), roots)?;
        eq(&format!("oracle roots n={n}"), common::roots(n).len(), 2 * roots)?;
        eq(&format!("lines n={n}"), enumerate_lines(n).map_err(e)?.len(), lines)?;
        eq(&format!("oracle lines n={n}"), common::lines(n).len(), lines)?;
    }
    Ok(())
}

fn vertex_counts() -> Check {
    let want = [
        (5, VertexKind::D2, 10),
        (6, VertexKind::A1, 36),
        (6, VertexKind::A2Cubed, 40),
        (7, VertexKind::A1, 63),
        (7, VertexKind::A2, 336),
        (7, VertexKind::A3Squared, 630),
        (7, VertexKind::A7, 36),
    ];
    let mut e7 = 0;
    for (n, kind, k) in want {
        let got = enumerate_vertex_subsystems(n, kind).map_err(e)?.len();
        e7 += if n == 7 { got } else { 0 };
        eq(&format!("({n}, {kind})"), got, k)?;
    }
    eq("E7 total", e7, 1065)
}

/// Matches horizontal roots to lines and checks the matching carries the
/// pairing of roots to the pairing of lines shifted by one.
fn horizontal() -> Check {
    for (n, k) in [(6, 16), (7, 27)] {
        let hor = horizontal_roots(n).map_err(e)?;
        eq(&format!("horizontal n={n}"), hor.len(), k)?;
        let lines = enumerate_lines(n - 1).map_err(e)?;
        let image: Vec<LatticeVector> = hor.iter().map(horizontal_root_to_line).collect::<Result<_, _>>().map_err(e)?;
        let as_set: BTreeSet<&LatticeVector> = image.iter().collect();
        eq(&format!("image n={n}"), as_set, lines.iter().collect())?;
        for (i, a) in hor.iter().enumerate() {
            for (j, b) in hor.iter().enumerate() {
                let lhs = a.pairing(b).map_err(e)?;
                let rhs = image[i].pairing(&image[j]).map_err(e)? - 1;
                eq(&format!("pairing n={n} ({i}, {j})"), lhs, rhs)?;
            }
        }
    }
    Ok(())
}

fn strata() -> Check {
    for (label, k) in [("a4", 135), ("a", 36), ("b", 40)] {
        let ty: StratumType = label.parse().map_err(e)?;
        eq(label, count_strata(&ty).map_err(e)?, k)?;
    }
    Ok(())
}

fn restriction_types() -> Check {
    let want: [(VertexKind, &[(&str, usize)]); 3] = [
        (VertexKind::A7, &[("A1×A5", 36)]),
        (VertexKind::A3Squared, &[("A1×A1×A3", 270), ("A2×A2", 360)]),
        (VertexKind::A2, &[("A1", 216), ("A2", 120)]),
    ];
    for (kind, parts) in want {
        let mut got: BTreeMap<String, usize> = BTreeMap::new();
        for s in enumerate_vertex_subsystems(7, kind).map_err(e)? {
            *got.entry(s.restrict().map_err(e)?.dynkin_type().to_string()).or_insert(0) += 1;
        }
        let want: BTreeMap<String, usize> = parts.iter().map(|(t, k)| (t.to_string(), *k)).collect();
        eq(&format!("{kind}"), got, want)?;
    }
    Ok(())
}

/// A restriction given per basis name; `e*` covers every exceptional class.
struct Target {
    name: &'static str,
    fiber: &'static str,
    weight: Q,
    role: Role,
    row: Option<&'static str>,
    coeffs: &'static [(&'static str, i64, i64)],
}

fn matches(basis: &[String], entries: &[Affine], coeffs: &[(&str, i64, i64)]) -> bool {
    basis.len() == entries.len()
        && basis.iter().zip(entries).all(|(b, a)| {
            let want = coeffs
                .iter()
                .find(|(n, _, _)| *n == b || (*n == "e*" && b.starts_with('e')))
                .map(|&(_, k, s)| Affine::ints(k, s))
                .unwrap_or_default();
            *a == want
        })
}

fn formulas() -> Check {
    let targets = [
        Target { name: "(-1+2c)(h1+h2)", fiber: "deg4_div", weight: qi(1), role: Role::BlF0(0), row: Some("deg4_div/2"), coeffs: &[("h1", -1, 2), ("h2", -1, 2)] },
        Target {
            name: "(-1+4c)(h1+h2)+(-1+2c)Σe",
            fiber: "deg4_div",
            weight: qi(1),
            role: Role::BlF0(4),
            row: Some("deg4_div/1"),
            coeffs: &[("h1", -1, 4), ("h2", -1, 4), ("e*", -1, 2)],
        },
        Target { name: "(-1+2c)h1+(-1+6c)h2", fiber: "a", weight: qi(1), role: Role::BlF0(0), row: Some("a/3"), coeffs: &[("h1", -1, 2), ("h2", -1, 6)] },
        Target {
            name: "(-1+5c)h+(1-2c)Σe1..e4-ce5",
            fiber: "a2",
            weight: qi(1),
            role: Role::X,
            row: None,
            coeffs: &[("h", -1, 5), ("e1", 1, -2), ("e2", 1, -2), ("e3", 1, -2), ("e4", 1, -2), ("e5", 0, -1)],
        },
        Target { name: "(-2+3c)h", fiber: "smooth3_eckardt_aug", weight: qi(1), role: Role::P2Eckardt, row: None, coeffs: &[("h", -2, 3)] },
        Target { name: "(-1+4c)h+c(h-e)", fiber: "a2", weight: q(1, 3), role: Role::Bl1P2, row: None, coeffs: &[("h", -1, 5), ("e*", 0, -1)] },
        Target { name: "(-1+6c)(h1+h2)", fiber: "a", weight: q(2, 5), role: Role::BlF0(0), row: None, coeffs: &[("h1", -1, 6), ("h2", -1, 6)] },
    ];
    let mut failed = vec![];
    for t in &targets {
        let f = chamber_model(t.fiber, t.weight).map_err(e)?;
        let comps: Vec<_> = f.components.iter().filter(|c| c.role == t.role && (t.row.is_none() || c.row.as_deref() == t.row)).collect();
        if comps.is_empty() {
            failed.push(format!("{} (no {} component in {})", t.name, t.role, t.fiber));
            continue;
        }
        let mut seen = BTreeSet::new();
        for c in comps {
            let r = polarization_restriction(&f, c.id).map_err(e)?;
            if !matches(&c.basis, &r.entries, t.coeffs) {
                seen.insert(r.format(&c.basis));
            }
        }
        if !seen.is_empty() {
            failed.push(format!("{} (computed {})", t.name, seen.into_iter().collect::<Vec<_>>().join("; ")));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(failed.join(", "))
    }
}

fn walls() -> Check {
    let r4 = compute_walls(4).map_err(e)?;
    eq("degree 4", r4.walls.iter().map(fmt_q).collect::<Vec<_>>(), vec!["1/2".to_string()])?;
    let r3 = compute_walls(3).map_err(e)?;
    let want: Vec<String> = ["2/3", "1/2", "1/3", "1/4", "1/6"].iter().map(|s| s.to_string()).collect();
    eq("degree 3", r3.walls.iter().map(fmt_q).collect::<Vec<_>>(), want)?;
    let tags = |r: &dpw_core::WallReport| r.chambers.iter().filter_map(|c| c.crossing_tag).collect::<Vec<_>>();
    use WallTag::*;
    eq("degree 4 kinds", tags(&r4), vec![Isomorphism])?;
    eq("degree 3 kinds", tags(&r3), vec![Isomorphism, Isomorphism, Isomorphism, Contraction, Isomorphism])
}

fn component_counts() -> Check {
    let count = |l: &str, c: Q| chamber_model(l, c).map(|m| m.components.len()).map_err(e);
    let roles = |l: &str, c: Q| chamber_model(l, c).map(|m| m.role_counts()).map_err(e);
    eq("deg4_div", (count("deg4_div", q(3, 4))?, count("deg4_div", q(1, 2))?), (6, 2))?;
    eq("deg4_codim2", (count("deg4_codim2", q(3, 4))?, count("deg4_codim2", q(1, 2))?), (12, 4))?;
    eq("a", (count("a", q(3, 4))?, count("a", q(1, 2))?), (8, 2))?;
    for l in ["a", "a2", "aa2"] {
        eq(&format!("{l} at 1/6"), count(l, q(1, 6))?, 1)?;
        eq(&format!("{l} above 1/6"), count(l, q(1, 5))? > 1, true)?;
    }
    for l in ["b", "ab"] {
        for c in [q(1, 6), q(1, 7), q(1, 8), q(10, 89)] {
            let r = roles(l, c)?;
            eq(&format!("{l} at {}", fmt_q(&c)), r, BTreeMap::from([("P2".to_string(), 3)]))?;
        }
    }
    Ok(())
}

fn sweeps() -> Result<Vec<(&'static str, Vec<FiberComplex>)>, String> {
    [4, 3].into_iter().flat_map(families).map(|l| sweep(l).map(|s| (l, s)).map_err(e)).collect()
}

fn conserved(f: &FiberComplex) -> Check {
    for c in chamber_samples(f.chamber.0, f.chamber.1) {
        let got = total_degree(f, c).map_err(e)?;
        eq(&format!("{} at {}", f.fiber_type, fmt_q(&c)), got, expected_total_degree(f.degree, c).map_err(e)?)?;
    }
    Ok(())
}

fn conservation() -> Check {
    for label in catalog_labels() {
        let f = build_fiber(label).map_err(e)?;
        if f.tier == 1 {
            conserved(&f)?;
        }
    }
    for (label, models) in sweeps()? {
        for m in models.iter().filter(|m| m.tier == 1) {
            conserved(m)?;
        }
        for pair in models.windows(2) {
            let w = pair[0].chamber.0;
            let next = stable_model(&pair[0], w).map_err(e)?;
            eq(&format!("{label} across {}", fmt_q(&w)), total_degree(&next, w).map_err(e)?, total_degree(&pair[0], w).map_err(e)?)?;
            conserved(&next)?;
        }
    }
    let a2 = build_fiber("a2").map_err(e)?;
    let x = a2.components.iter().find(|c| c.role == Role::X).ok_or("a2 has no X")?.id;
    let g = apply_x_degeneration(&a2, x).map_err(e)?;
    conserved(&g)?;
    for c in chamber_samples(g.chamber.0, g.chamber.1) {
        eq("x-degeneration", total_degree(&g, c).map_err(e)?, total_degree(&a2, c).map_err(e)?)?;
    }
    Ok(())
}

fn weyl_closed<T: Eq + std::hash::Hash + Clone>(items: &[T], gens: &[usize], act: impl Fn(&T, usize) -> T) -> bool {
    let set: HashSet<&T> = items.iter().collect();
    items.iter().all(|x| gens.iter().all(|&g| set.contains(&act(x, g))))
}

fn properties() -> Check {
    for (label, models) in sweeps()? {
        for m in models.iter().filter(|m| m.tier == 1) {
            let form = canonical_form(m);
            for c in chamber_samples(m.chamber.0, m.chamber.1).into_iter().skip(1) {
                let once = stable_model(m, c).map_err(e)?;
                let twice = stable_model(&once, c).map_err(e)?;
                eq(&format!("{label} idempotent at {}", fmt_q(&c)), (canonical_form(&once), canonical_form(&twice)), (form.clone(), form.clone()))?;
            }
        }
    }
    for label in catalog_labels() {
        let f = build_fiber(label).map_err(e)?;
        let back = FiberComplex::from_json(&f.to_json().map_err(e)?).map_err(e)?;
        eq(&format!("{label} JSON"), back == f, true)?;
    }
    for n in 5..=7 {
        let rs = root_system(n).map_err(e)?;
        let gens = rs.simple_reflections();
        let roots = enumerate_roots(n).map_err(e)?;
        let signed: Vec<LatticeVector> = roots
            .iter()
            .flat_map(|r| [r.clone(), LatticeVector::from_coeffs(&r.coeffs().iter().map(|x| -x).collect::<Vec<_>>()).expect("rank")])
            .collect();
        let act = |v: &LatticeVector, g: usize| reflect(v, rs.root(g)).expect("same rank");
        eq(&format!("roots n={n}"), weyl_closed(&signed, &gens, act), true)?;
        eq(&format!("lines n={n}"), weyl_closed(&enumerate_lines(n).map_err(e)?, &gens, act), true)?;
        for &kind in VertexKind::vertex_kinds(n).map_err(e)? {
            let subs = enumerate_vertex_subsystems(n, kind).map_err(e)?;
            eq(&format!("({n}, {kind})"), weyl_closed(subs, &gens, |s, g| s.reflect_by_index(g)), true)?;
        }
    }
    let gens6 = root_system(6).map_err(e)?.simple_reflections();
    for ty in StratumType::all() {
        let strata = enumerate_strata(&ty).map_err(e)?;
        eq(&format!("strata {ty}"), weyl_closed(&strata, &gens6, StratumLabel::reflect_by_index), true)?;
    }
    let rs7 = root_system(7).map_err(e)?;
    let triples: Vec<BTreeSet<LatticeVector>> =
        enumerate_eckardt_triples().map_err(e)?.into_iter().map(|t| t.into_iter().collect()).collect();
    // Reflections fixing e7 permute the triples.
    let fixing: Vec<usize> = rs7.simple_reflections().into_iter().filter(|&g| rs7.root(g).multiplicities()[6] == 0).collect();
    let act = |t: &BTreeSet<LatticeVector>, g: usize| t.iter().map(|v| reflect(v, rs7.root(g)).expect("rank")).collect();
    eq("Eckardt triples", weyl_closed(&triples, &fixing, act), true)
}

#[test]
fn acceptance() {
    let criteria: [Named; 10] = [
        ("1 root and line counts", counts),
        ("2 vertex subsystem counts", vertex_counts),
        ("3 horizontal divisors and line bijection", horizontal),
        ("4 stratum counts", strata),
        ("5 restriction type partitions", restriction_types),
        ("6 restriction formulas", formulas),
        ("7 walls and wall kinds", walls),
        ("8 component counts per chamber", component_counts),
        ("9 total degree conservation", conservation),
        ("10 idempotence, round trip, Weyl invariance", properties),
    ];
    let mut failures = vec![];
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(d) => {
                println!("FAIL {name}: {d}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
