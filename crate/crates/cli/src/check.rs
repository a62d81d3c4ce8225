//! The invariant suite behind `dpw check --all`.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use dpw_core::catalog::chamber_samples;
use dpw_core::roots::{horizontal_root_to_line, horizontal_roots, root_system};
use dpw_core::surface::{check_fiber, expected_total_degree};
use dpw_core::walls::{families, sweep};
use dpw_core::{
    build_fiber, canonical_form, catalog_labels, compute_walls, count_strata, enumerate_lines, enumerate_roots,
    enumerate_vertex_subsystems, fmt_q, stable_model, total_degree, Error, FiberComplex, RootSubsystem, VertexKind,
    WallTag,
};

#[derive(Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {}", self.name)
        } else {
            format!("{status} {}: {}", self.name, self.detail)
        }
    }
}

type Outcome = Result<Option<String>, Error>;
type Named = (&'static str, fn() -> Outcome);

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Option<String> {
    (got != want).then(|| format!("{what}: got {got:?}, expected {want:?}"))
}

fn counts() -> Outcome {
    for (n, roots, lines) in [(5, 20, 16), (6, 36, 27), (7, 63, 56)] {
        if let Some(e) = expect(&format!("roots n={n}"), enumerate_roots(n)?.len(), roots) {
            return Ok(Some(e));
        }
        if let Some(e) = expect(&format!("lines n={n}"), enumerate_lines(n)?.len(), lines) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn vertices() -> Outcome {
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
        let got = enumerate_vertex_subsystems(n, kind)?.len();
        if n == 7 {
            e7 += got;
        }
        if let Some(e) = expect(&format!("({n}, {kind})"), got, k) {
            return Ok(Some(e));
        }
    }
    Ok(expect("E7 total", e7, 1065))
}

fn horizontal() -> Outcome {
    for (n, k) in [(6, 16), (7, 27)] {
        let hor = horizontal_roots(n)?;
        if let Some(e) = expect(&format!("horizontal n={n}"), hor.len(), k) {
            return Ok(Some(e));
        }
        let lines: Vec<_> = hor.iter().map(horizontal_root_to_line).collect::<Result<_, _>>()?;
        let distinct: HashSet<_> = lines.iter().collect();
        if distinct.len() != k || lines.iter().any(|l| !l.is_line()) {
            return Ok(Some(format!("n={n}: horizontal roots do not biject onto lines")));
        }
        for (i, a) in hor.iter().enumerate() {
            for (j, b) in hor.iter().enumerate() {
                if a.pairing(b)? != lines[i].pairing(&lines[j])? - 1 {
                    return Ok(Some(format!("n={n}: pairing not preserved")));
                }
            }
        }
    }
    Ok(None)
}

fn strata() -> Outcome {
    for (label, k) in [("a4", 135), ("a", 36), ("b", 40)] {
        if let Some(e) = expect(label, count_strata(&label.parse()?)?, k) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn weyl() -> Outcome {
    for n in 5..=7 {
        let rs = root_system(n)?;
        for &kind in VertexKind::vertex_kinds(n)? {
            let subs = enumerate_vertex_subsystems(n, kind)?;
            let set: HashSet<&RootSubsystem> = subs.iter().collect();
            for i in rs.simple_reflections() {
                if subs.iter().any(|s| !set.contains(&s.reflect_by_index(i))) {
                    return Ok(Some(format!("({n}, {kind}) not closed under reflection {i}")));
                }
            }
        }
    }
    Ok(None)
}

fn catalog() -> Outcome {
    for label in catalog_labels() {
        let f = build_fiber(label)?;
        if let Some(v) = check_fiber(&f).first() {
            return Ok(Some(format!("{label}: {}", v.message)));
        }
        if FiberComplex::from_json(&f.to_json()?)? != f {
            return Ok(Some(format!("{label}: JSON round trip differs")));
        }
    }
    Ok(None)
}

fn all_sweeps() -> Result<Vec<(String, Vec<FiberComplex>)>, Error> {
    let mut out = vec![];
    for degree in [4, 3] {
        for label in families(degree) {
            out.push((label.to_string(), sweep(label)?));
        }
    }
    Ok(out)
}

fn conservation() -> Outcome {
    for (label, models) in all_sweeps()? {
        for m in models.iter().filter(|m| m.tier == 1) {
            for c in chamber_samples(m.chamber.0, m.chamber.1) {
                let got = total_degree(m, c)?;
                let want = expected_total_degree(m.degree, c)?;
                if got != want {
                    return Ok(Some(format!("{label} at {}: {} vs {}", fmt_q(&c), fmt_q(&got), fmt_q(&want))));
                }
            }
        }
    }
    Ok(None)
}

fn idempotence() -> Outcome {
    for (label, models) in all_sweeps()? {
        for m in models.iter().filter(|m| m.tier == 1) {
            let form = canonical_form(m);
            for c in chamber_samples(m.chamber.0, m.chamber.1).into_iter().skip(1) {
                if canonical_form(&stable_model(m, c)?) != form {
                    return Ok(Some(format!("{label} changes at interior weight {}", fmt_q(&c))));
                }
            }
        }
    }
    Ok(None)
}

fn walls() -> Outcome {
    let want: BTreeMap<u32, (Vec<&str>, Vec<WallTag>)> = BTreeMap::from([
        (4, (vec!["1/2"], vec![WallTag::Isomorphism])),
        (
            3,
            (
                vec!["2/3", "1/2", "1/3", "1/4", "1/6"],
                vec![
                    WallTag::Isomorphism,
                    WallTag::Isomorphism,
                    WallTag::Isomorphism,
                    WallTag::Contraction,
                    WallTag::Isomorphism,
                ],
            ),
        ),
    ]);
    for (degree, (ws, tags)) in want {
        let r = compute_walls(degree)?;
        let got: Vec<String> = r.walls.iter().map(fmt_q).collect();
        if let Some(e) = expect(&format!("degree {degree} walls"), got, ws.iter().map(|s| s.to_string()).collect()) {
            return Ok(Some(e));
        }
        let got_tags: Vec<WallTag> = r.chambers.iter().filter_map(|c| c.crossing_tag).collect();
        if let Some(e) = expect(&format!("degree {degree} tags"), got_tags, tags) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

pub fn run_all() -> Vec<CheckResult> {
    let checks: [Named; 9] = [
        ("root and line counts", counts),
        ("vertex subsystem counts", vertices),
        ("horizontal roots and lines", horizontal),
        ("stratum counts", strata),
        ("Weyl invariance of vertex sets", weyl),
        ("catalog validity and JSON round trip", catalog),
        ("total degree conservation", conservation),
        ("stable model idempotence", idempotence),
        ("walls and wall kinds", walls),
    ];
    checks
        .iter()
        .map(|&(name, f)| match f() {
            Ok(None) => CheckResult { name, pass: true, detail: String::new() },
            Ok(Some(d)) => CheckResult { name, pass: false, detail: d },
            Err(e) => CheckResult { name, pass: false, detail: e.to_string() },
        })
        .collect()
}
