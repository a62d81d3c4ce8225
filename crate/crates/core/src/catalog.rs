//! Built-in fibers. Tier-1 fibers carry full curve data, realized from the
//! skeleton of their stratum by solving for curve classes on each
//! component's role model. Tier-2 fibers keep roles, counts and restrictions.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::models::{role_model, solve_classes, RoleModel};
use crate::rational::{q, qi};
use crate::roots::{horizontal_root_to_line, RootMask, VertexKind};
use crate::skeleton::{a1_root, base_vertex, fiber_skeleton, fiber_vertices, total_rank, Skeleton};
use crate::surface::{
    chamber_at, component_restriction, refresh_special_points, slc_interval, validate, CurveKind, CurveRecord, FiberComplex, GlueRef,
    Role, SpecialPoint, SurfaceComponent,
};

/// One row of the component table: components over a stratum whose vertex
/// kinds and nesting count match carry the given role.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub fiber: &'static str,
    pub label: &'static str,
    /// Sorted vertex kinds.
    pub kinds: &'static [&'static str],
    /// Containment pairs among the vertices; `None` matches any.
    pub nested: Option<usize>,
    pub role: Role,
    pub count: usize,
}

const fn row(
    fiber: &'static str,
    label: &'static str,
    kinds: &'static [&'static str],
    nested: Option<usize>,
    role: Role,
    count: usize,
) -> TableRow {
    TableRow { fiber, label, kinds, nested, role, count }
}

const F0: Role = Role::BlF0(0);

pub static TABLE: &[TableRow] = &[
    row("a", "1", &["A1"], None, Role::WeakA1(1), 1),
    row("a", "2", &["A7"], None, Role::BlF0(6), 1),
    row("a", "3", &["A2"], None, F0, 6),
    row("a2", "1", &["A1", "A1"], None, Role::WeakA1(2), 1),
    row("a2", "2", &["A1", "A7"], None, Role::BlF0(5), 2),
    row("a2", "3", &["A3^2"], None, Role::X, 1),
    row("a2", "4", &["A2", "A7"], None, F0, 4),
    row("a2", "5a", &["A1", "A2"], None, F0, 8),
    row("a2", "5b", &["A2", "A2"], None, F0, 4),
    row("a3", "1", &["A1", "A1", "A1"], None, Role::WeakA1(3), 1),
    row("a3", "2", &["A1", "A1", "A7"], None, Role::BlF0(4), 3),
    row("a3", "3", &["A1", "A3^2"], None, Role::X, 3),
    row("a3", "4a", &["A1", "A2", "A7"], None, F0, 12),
    row("a3", "4b", &["A2", "A2", "A7"], None, F0, 12),
    row("a3", "5a", &["A1", "A1", "A2"], None, F0, 6),
    row("a3", "5b", &["A1", "A2", "A2"], None, F0, 6),
    row("a4", "1", &["A1", "A1", "A1", "A1"], None, Role::WeakA1(4), 1),
    row("a4", "2", &["A1", "A1", "A1", "A7"], None, Role::BlF0(3), 4),
    row("a4", "3", &["A1", "A1", "A3^2"], None, Role::X, 6),
    row("a4", "4a", &["A1", "A1", "A2", "A7"], None, F0, 24),
    row("a4", "4b", &["A1", "A2", "A2", "A7"], None, F0, 24),
    row("b", "1", &["A2"], None, Role::WeakA2, 3),
    row("b", "2", &["A3^2"], None, F0, 9),
    row("ab", "1", &["A1", "A2"], Some(1), Role::WeakA2, 1),
    row("ab", "2", &["A1", "A2"], Some(0), Role::Z, 2),
    row("ab", "3", &["A2", "A2"], None, F0, 6),
    row("ab", "4a", &["A2", "A7"], None, Role::BlF0(4), 2),
    row("ab", "4b", &["A3^2", "A7"], None, F0, 2),
    row("ab", "5", &["A1", "A3^2"], Some(1), F0, 6),
    row("ab", "6", &["A1", "A3^2"], Some(0), F0, 1),
    row("ab", "7", &["A2", "A3^2"], None, F0, 6),
    row("a2b", "1", &["A1", "A1", "A2"], Some(1), Role::Z, 2),
    row("a2b", "2", &["A1", "A1", "A2"], Some(0), Role::M05, 1),
    row("a2b", "3", &["A1", "A2", "A2"], Some(1), F0, 6),
    row("a2b", "4", &["A2", "A3^2"], None, Role::X, 1),
    row("a2b", "5a", &["A1", "A2", "A2"], Some(0), F0, 2),
    row("a2b", "5b", &["A2", "A2", "A2"], None, F0, 1),
    row("a2b", "6a", &["A1", "A2", "A7"], Some(3), Role::BlF0(4), 2),
    row("a2b", "6b", &["A1", "A2", "A7"], Some(2), Role::BlF0(3), 2),
    row("a2b", "6c", &["A1", "A3^2", "A7"], None, F0, 4),
    row("a2b", "6d", &["A2", "A2", "A7"], None, F0, 4),
    row("a2b", "6e", &["A2", "A3^2", "A7"], None, F0, 4),
    row("a2b", "7", &["A1", "A1", "A3^2"], Some(2), F0, 3),
    row("a2b", "8", &["A1", "A1", "A3^2"], Some(1), F0, 2),
    row("a2b", "9", &["A1", "A2", "A3^2"], Some(2), F0, 6),
    row("a2b", "10", &["A2", "A2", "A3^2"], None, F0, 3),
    row("a2b", "11", &["A1", "A2", "A3^2"], Some(1), F0, 2),
    row("a3b", "1", &["A1", "A1", "A1", "A2"], None, Role::M05, 3),
    row("a3b", "2", &["A1", "A2", "A3^2"], None, Role::X, 3),
    row("a3b", "3a", &["A1", "A1", "A2", "A2"], None, F0, 6),
    row("a3b", "3b", &["A1", "A2", "A2", "A2"], None, F0, 3),
    row("a3b", "4a", &["A1", "A1", "A2", "A7"], None, Role::M05, 6),
    row("a3b", "4b", &["A1", "A1", "A3^2", "A7"], None, F0, 6),
    row("a3b", "4c", &["A1", "A2", "A2", "A7"], None, F0, 12),
    row("a3b", "4d", &["A1", "A2", "A3^2", "A7"], None, F0, 12),
    row("a3b", "4e", &["A2", "A2", "A3^2", "A7"], None, F0, 6),
    row("a3b", "5a", &["A1", "A1", "A1", "A3^2"], None, F0, 3),
    row("a3b", "5b", &["A1", "A1", "A2", "A3^2"], None, F0, 6),
    row("a3b", "5c", &["A1", "A2", "A2", "A3^2"], None, F0, 3),
    row("deg4_div", "1", &["A1"], None, Role::BlF0(4), 2),
    row("deg4_div", "2", &["A2^3"], None, F0, 4),
    row("deg4_codim2", "1", &["A1", "A1"], None, Role::M05, 4),
    row("deg4_codim2", "2", &["A1", "A2^3"], None, F0, 8),
];

pub fn table_rows(fiber: &str) -> Vec<&'static TableRow> {
    TABLE.iter().filter(|r| r.fiber == fiber).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub fiber_type: &'static str,
    pub degree: u32,
    pub tier: u8,
    pub description: &'static str,
}

pub static CATALOG: &[CatalogEntry] = &[
    CatalogEntry { fiber_type: "smooth4", degree: 4, tier: 1, description: "smooth quartic del Pezzo with 16 lines" },
    CatalogEntry { fiber_type: "deg4_div", degree: 4, tier: 1, description: "fiber over a general boundary divisor" },
    CatalogEntry { fiber_type: "deg4_codim2", degree: 4, tier: 1, description: "fiber over two meeting boundary divisors" },
    CatalogEntry { fiber_type: "smooth3", degree: 3, tier: 1, description: "smooth cubic with 27 lines, no Eckardt point" },
    CatalogEntry {
        fiber_type: "smooth3_eckardt",
        degree: 3,
        tier: 1,
        description: "smooth cubic with one Eckardt point",
    },
    CatalogEntry {
        fiber_type: "smooth3_eckardt_aug",
        degree: 3,
        tier: 1,
        description: "Eckardt cubic blown up at the point with a plane attached",
    },
    CatalogEntry { fiber_type: "a", degree: 3, tier: 1, description: "one A1 divisor" },
    CatalogEntry { fiber_type: "a2", degree: 3, tier: 1, description: "two orthogonal A1 divisors" },
    CatalogEntry { fiber_type: "aa2", degree: 3, tier: 1, description: "a2 with its X component degenerated" },
    CatalogEntry { fiber_type: "b", degree: 3, tier: 1, description: "one A2^3 divisor" },
    CatalogEntry { fiber_type: "ab", degree: 3, tier: 1, description: "A2^3 divisor meeting an A1 divisor" },
    CatalogEntry { fiber_type: "a3", degree: 3, tier: 2, description: "three A1 divisors" },
    CatalogEntry { fiber_type: "a4", degree: 3, tier: 2, description: "four A1 divisors" },
    CatalogEntry { fiber_type: "a2b", degree: 3, tier: 2, description: "A2^3 divisor meeting two A1 divisors" },
    CatalogEntry { fiber_type: "a3b", degree: 3, tier: 2, description: "A2^3 divisor meeting three A1 divisors" },
];

pub fn catalog_labels() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.fiber_type).collect()
}

pub fn catalog_entry(label: &str) -> Result<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.fiber_type == label).ok_or_else(|| Error::UnknownFiber(label.to_string()))
}

/// Short name of a line class: `e1`, `l12`, `c3` (conic missing point 3),
/// or `c` for the conic through all five points on the quartic surface.
pub fn line_name(v: &LatticeVector) -> String {
    let ms = v.multiplicities();
    let idx = |want: i64| -> Vec<usize> { (0..ms.len()).filter(|&i| ms[i] == want).map(|i| i + 1).collect() };
    match v.degree() {
        0 => format!("e{}", idx(1).first().copied().unwrap_or(0)),
        1 => format!("l{}", idx(-1).iter().map(|i| i.to_string()).collect::<String>()),
        _ => match idx(0).first() {
            Some(i) => format!("c{i}"),
            None => "c".into(),
        },
    }
}

/// Line of the fiber matched with a horizontal root label of the total space.
fn line_of_root(degree: u32, label: &str) -> Result<LatticeVector> {
    let alpha = LatticeVector::from_root_label(total_rank(degree)?, label)?;
    horizontal_root_to_line(&alpha)
}

fn stratum(label: &str) -> Result<(u32, Vec<RootMask>)> {
    let a1 = |l: &str| base_vertex(3, VertexKind::A1, &[l]);
    let b = || base_vertex(3, VertexKind::A2Cubed, &["123456"]);
    let d2 = |x: &str, y: &str| base_vertex(4, VertexKind::D2, &[x, y]);
    Ok(match label {
        "a" => (3, vec![a1("123456")?]),
        "a2" => (3, vec![a1("123456")?, a1("56")?]),
        "a3" => (3, vec![a1("123")?, a1("345")?, a1("156")?]),
        "a4" => (3, vec![a1("123")?, a1("345")?, a1("146")?, a1("256")?]),
        "b" => (3, vec![b()?]),
        "ab" => (3, vec![b()?, a1("12")?]),
        "a2b" => (3, vec![b()?, a1("12")?, a1("45")?]),
        "a3b" => (3, vec![b()?, a1("12")?, a1("45")?, a1("123456")?]),
        "deg4_div" => (4, vec![d2("45", "123")?]),
        "deg4_codim2" => (4, vec![d2("45", "123")?, d2("12", "345")?]),
        _ => return Err(Error::UnknownFiber(label.to_string())),
    })
}

fn matching_row<'a>(rows: &[&'a TableRow], kinds: &[String], nested: usize) -> Option<&'a TableRow> {
    rows.iter()
        .find(|r| r.kinds.len() == kinds.len() && r.kinds.iter().zip(kinds).all(|(a, b)| a == b) && r.nested.is_none_or(|n| n == nested))
        .copied()
}

fn component_from_model(id: usize, model: &RoleModel, curves: Vec<CurveRecord>, row: Option<String>) -> SurfaceComponent {
    SurfaceComponent {
        id,
        role: model.role,
        basis: model.basis.clone(),
        gram: model.gram.clone(),
        k: model.k.clone(),
        curves,
        extremal: model.extremal.clone(),
        contracted: vec![],
        formula: None,
        row,
    }
}

/// Realizes the skeleton of a stratum with the table's roles.
fn realize(label: &str, degree: u32, sk: &Skeleton) -> Result<FiberComplex> {
    let rows = table_rows(label);
    let vs = fiber_vertices(degree)?;
    let mut components = vec![];
    for (id, sc) in sk.components.iter().enumerate() {
        let r = matching_row(&rows, &sc.kinds, sc.nested).ok_or_else(|| {
            Error::Catalog(format!("{label}: no table row for kinds {:?} nested {}", sc.kinds, sc.nested))
        })?;
        let lines: Vec<LatticeVector> = sc.lines.iter().map(|l| line_of_root(degree, l)).collect::<Result<_>>()?;
        let (model, preset) = match r.role {
            Role::WeakA1(_) => {
                let roots: Vec<Vec<i64>> = sc
                    .vertices
                    .iter()
                    .filter(|&&v| vs[v].kind == VertexKind::A1)
                    .map(|&v| a1_root(&vs[v]).map(|x| x.coeffs().to_vec()))
                    .collect::<Result<_>>()?;
                let preset: Vec<Option<Vec<i64>>> = lines.iter().map(|l| Some(l.coeffs().to_vec())).collect();
                (role_model(r.role, &roots)?, preset)
            }
            role => (role_model(role, &[])?, vec![]),
        };
        let classes = solve_classes(&model, sc, &preset).ok_or_else(|| {
            Error::Catalog(format!("{label}: component {id} admits no {} realization", r.role))
        })?;
        let nl = sc.lines.len();
        let mut curves = vec![];
        for (i, class) in classes.into_iter().enumerate() {
            if i < nl {
                curves.push(CurveRecord::line(class, line_name(&lines[i])));
            } else {
                let other = sc.neighbors[i - nl];
                let back = sk.components[other].neighbors.iter().position(|&x| x == id).ok_or_else(|| {
                    Error::Catalog(format!("{label}: adjacency of components {id} and {other} is not symmetric"))
                })?;
                let curve = sk.components[other].lines.len() + back;
                curves.push(CurveRecord::double(class, GlueRef { component: other, curve }));
            }
        }
        components.push(component_from_model(id, &model, curves, Some(format!("{label}/{}", r.label))));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for c in &components {
        let r = c.row.as_deref().and_then(|s| s.split('/').nth(1)).unwrap_or("");
        *counts.entry(r.to_string()).or_insert(0) += 1;
    }
    let mut fiber = FiberComplex {
        fiber_type: label.to_string(),
        degree,
        tier: 1,
        chamber: (qi(0), qi(1)),
        components,
        special_points: vec![],
        special_points_complete: true,
        provenance: vec![
            "components: pairwise compatible boundary vertices of the total space covering the stratum".into(),
            "double curves: components whose vertex sets differ by one vertex".into(),
            "lines: horizontal A1 vertices compatible with the component".into(),
            "curve classes: solved on the role model from the incidence pattern".into(),
        ],
    };
    for r in &rows {
        let got = counts.get(r.label).copied().unwrap_or(0);
        if got != r.count {
            fiber.provenance.push(format!("row {}: generated {got} components, table lists {}", r.label, r.count));
        }
    }
    refresh_special_points(&mut fiber);
    Ok(fiber)
}

/// Validates and sets the chamber, whose top is capped by the slc bound.
fn finish(mut fiber: FiberComplex) -> Result<FiberComplex> {
    validate(&fiber)?;
    let hi = slc_interval(&fiber).c_max.map_or(qi(1), |m| m.min(qi(1)));
    fiber.chamber = chamber_at(&fiber, hi)?;
    Ok(fiber)
}

fn tier1(label: &str) -> Result<FiberComplex> {
    let (degree, w) = stratum(label)?;
    let sk = fiber_skeleton(degree, &w)?;
    let fiber = realize(label, degree, &sk)?;
    if fiber.provenance.iter().any(|p| p.starts_with("row ")) {
        return Err(Error::Catalog(format!("{label}: component counts differ from the table")));
    }
    finish(fiber)
}

/// Roles and restrictions only. Rows the generator realizes fewer times
/// than the table lists are padded with copies of realized components.
fn tier2(label: &str) -> Result<FiberComplex> {
    let (degree, w) = stratum(label)?;
    let sk = fiber_skeleton(degree, &w)?;
    let full = realize(label, degree, &sk)?;
    let mut components = vec![];
    for c in &full.components {
        let mut t = c.clone();
        t.formula = Some(component_restriction(c)?);
        t.curves.clear();
        components.push(t);
    }
    let mut provenance = full.provenance.clone();
    provenance.push("restrictions: computed from the realized curve data, then curve data dropped".into());
    for r in table_rows(label) {
        let tag = format!("{label}/{}", r.label);
        let have: Vec<SurfaceComponent> = components.iter().filter(|c| c.row.as_deref() == Some(&tag)).cloned().collect();
        if have.is_empty() || have.len() >= r.count {
            continue;
        }
        for k in 0..r.count - have.len() {
            let mut c = have[k % have.len()].clone();
            c.id = components.len();
            components.push(c);
        }
        provenance.push(format!("row {}: padded to the table count by copying realized components", r.label));
    }
    let fiber = FiberComplex {
        fiber_type: label.to_string(),
        degree,
        tier: 2,
        chamber: (qi(0), qi(1)),
        components,
        special_points: vec![],
        special_points_complete: false,
        provenance,
    };
    finish(fiber)
}

fn smooth(degree: u32) -> Result<FiberComplex> {
    let (role, label) = match degree {
        3 => (Role::WeakA1(0), "smooth3"),
        _ => (Role::Dp4, "smooth4"),
    };
    let model = role_model(role, &[])?;
    let curves = model
        .candidates
        .iter()
        .map(|c| Ok(CurveRecord::line(c.class.clone(), line_name(&LatticeVector::from_coeffs(&c.class)?))))
        .collect::<Result<Vec<_>>>()?;
    let fiber = FiberComplex {
        fiber_type: label.into(),
        degree,
        tier: 1,
        chamber: (qi(0), qi(1)),
        components: vec![component_from_model(0, &model, curves, None)],
        special_points: vec![],
        special_points_complete: true,
        provenance: vec!["all lines of the surface, in general position".into()],
    };
    let mut fiber = fiber;
    refresh_special_points(&mut fiber);
    finish(fiber)
}

/// Lines `e1`, `l12`, `c2` on the smooth cubic form a triangle; this variant
/// makes them concurrent.
fn smooth3_eckardt() -> Result<FiberComplex> {
    let mut f = smooth(3)?;
    f.fiber_type = "smooth3_eckardt".into();
    let comp = &f.components[0];
    let find = |name: &str| {
        comp.curves.iter().position(|c| c.labels == [name]).ok_or_else(|| Error::Catalog(format!("no line {name}")))
    };
    let curves = vec![find("e1")?, find("l12")?, find("c2")?];
    f.special_points.push(SpecialPoint { component: 0, curves, mults: vec![], has_double: false, doubles: 0 });
    f.provenance.push("Eckardt point: lines e1, l12, c2 concurrent".into());
    refresh_special_points(&mut f);
    finish(f)
}

fn with_cache(label: &str, build: impl FnOnce() -> Result<FiberComplex>) -> Result<FiberComplex> {
    static CACHE: OnceLock<Mutex<BTreeMap<String, FiberComplex>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(f) = cache.lock().expect("catalog cache").get(label) {
        return Ok(f.clone());
    }
    let f = build()?;
    cache.lock().expect("catalog cache").insert(label.to_string(), f.clone());
    Ok(f)
}

/// The catalogued fiber with the given label.
pub fn build_fiber(label: &str) -> Result<FiberComplex> {
    catalog_entry(label)?;
    with_cache(label, || match label {
        "smooth3" => smooth(3),
        "smooth4" => smooth(4),
        "smooth3_eckardt" => smooth3_eckardt(),
        "smooth3_eckardt_aug" => {
            let f = smooth3_eckardt()?;
            let p = f
                .special_points
                .iter()
                .position(|p| p.curves.len() == 3)
                .ok_or_else(|| Error::Catalog("Eckardt point missing".into()))?;
            let mut g = apply_eckardt_augmentation(&f, p)?;
            g.fiber_type = label.into();
            Ok(g)
        }
        "aa2" => {
            let f = build_fiber("a2")?;
            let x = f.components.iter().find(|c| c.role == Role::X).map(|c| c.id).expect("a2 has an X component");
            let mut g = apply_x_degeneration(&f, x)?;
            g.fiber_type = label.into();
            Ok(g)
        }
        "a3" | "a4" | "a2b" | "a3b" => tier2(label),
        _ => tier1(label),
    })
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn f0_component(id: usize) -> Result<SurfaceComponent> {
    let m = role_model(Role::BlF0(0), &[])?;
    Ok(component_from_model(id, &m, vec![], None))
}

/// Replaces an `X` component by `M05` and three `F0` components, keeping
/// all gluings to the rest of the fiber.
pub fn apply_x_degeneration(fiber: &FiberComplex, comp_id: usize) -> Result<FiberComplex> {
    let xi = fiber.index_of(comp_id)?;
    let x = &fiber.components[xi];
    if x.role != Role::X || x.rank() != 6 {
        return Err(Error::Invalid(format!("component {comp_id} of {} is a {}, not an X", fiber.fiber_type, x.role)));
    }
    if fiber.tier != 1 {
        return Err(Error::Invalid(format!("{} carries no curve data", fiber.fiber_type)));
    }
    let next = fiber.components.iter().map(|c| c.id).max().unwrap_or(0) + 1;
    let (m_id, main_id, a_id, b_id) = (next, next + 1, next + 2, next + 3);
    let x_model = role_model(Role::X, &[])?;
    let name_of = |v: &[i64]| x_model.candidates.iter().find(|c| c.class == v).map(|c| c.name.clone());

    let mm = role_model(Role::M05, &[])?;
    let mut m05 = component_from_model(m_id, &mm, vec![], None);
    let mut main = f0_component(main_id)?;
    let mut fa = f0_component(a_id)?;
    let mut fb = f0_component(b_id)?;
    let (u, v) = (unit(2, 0), unit(2, 1));
    let pc = |d: i64, pts: &[usize]| {
        let mut w = vec![0; 5];
        w[0] = d;
        for &p in pts {
            w[p] -= 1;
        }
        w
    };
    let e = |i: usize| unit(5, i);

    // Internal gluings first.
    let glue = |a: &mut SurfaceComponent, ca: Vec<i64>, b: &mut SurfaceComponent, cb: Vec<i64>| {
        let (ia, ib) = (a.curves.len(), b.curves.len());
        a.curves.push(CurveRecord::double(ca, GlueRef { component: b.id, curve: ib }));
        b.curves.push(CurveRecord::double(cb, GlueRef { component: a.id, curve: ia }));
    };
    glue(&mut m05, e(1), &mut fa, u.clone());
    glue(&mut m05, e(2), &mut fb, u.clone());
    glue(&mut m05, pc(1, &[1, 2]), &mut main, u.clone());
    glue(&mut fa, v.clone(), &mut main, v.clone());
    glue(&mut fb, v.clone(), &mut main, v.clone());

    let mut out = fiber.clone();
    // Where each curve of X goes: (component, class).
    let mut moved: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (i, c) in x.curves.iter().enumerate() {
        let name = name_of(&c.class).ok_or_else(|| {
            Error::Invalid(format!("curve {} of X is not a catalogued class", x.format_class(&c.class)))
        })?;
        let place = |t: &mut SurfaceComponent, class: Vec<i64>| -> (usize, usize) {
            let mut r = c.clone();
            r.class = class;
            t.curves.push(r);
            (t.id, t.curves.len() - 1)
        };
        let at = match name.as_str() {
            "e1" => place(&mut fa, u.clone()),
            "e2" => place(&mut fb, u.clone()),
            "e3" => place(&mut m05, e(3)),
            "e4" => place(&mut m05, e(4)),
            "e5" => place(&mut main, v.clone()),
            "L125" => place(&mut main, u.clone()),
            "L345" => place(&mut m05, pc(1, &[3, 4])),
            "l13" | "l14" | "l23" | "l24" => {
                let digits: Vec<usize> = name[1..].chars().map(|ch| ch as usize - '0' as usize).collect();
                let side = if digits[0] == 1 { &mut fa } else { &mut fb };
                if c.kind == CurveKind::Line {
                    let mut r = c.clone();
                    r.class = v.clone();
                    side.curves.push(r);
                }
                place(&mut m05, pc(1, &digits))
            }
            "h-e5" => {
                if c.kind == CurveKind::Line {
                    for side in [&mut fa, &mut fb] {
                        let mut r = c.clone();
                        r.class = u.clone();
                        side.curves.push(r);
                    }
                }
                place(&mut main, u.clone())
            }
            other => return Err(Error::Invalid(format!("unexpected curve {other} on X"))),
        };
        if c.kind == CurveKind::Double {
            moved.insert(i, at);
        } else if c.kind == CurveKind::Other {
            return Err(Error::Invalid("X carries a curve of kind other".into()));
        }
    }
    for comp in out.components.iter_mut() {
        for r in comp.curves.iter_mut() {
            if let Some(g) = r.glue {
                if g.component == comp_id {
                    let (c, k) = moved[&g.curve];
                    r.glue = Some(GlueRef { component: c, curve: k });
                }
            }
        }
    }
    out.components.remove(xi);
    out.components.extend([m05, main, fa, fb]);
    out.special_points.retain(|p| p.component != comp_id);
    out.provenance.push(format!("component {comp_id} (X) degenerated into components {m_id}..={b_id}"));
    refresh_special_points(&mut out);
    validate(&out)?;
    out.chamber = chamber_at(&out, qi(1))?;
    Ok(out)
}

/// Blows up an Eckardt point and attaches a plane carrying the three lines.
pub fn apply_eckardt_augmentation(fiber: &FiberComplex, point: usize) -> Result<FiberComplex> {
    let p = fiber
        .special_points
        .get(point)
        .ok_or_else(|| Error::Invalid(format!("{} has no special point {point}", fiber.fiber_type)))?
        .clone();
    let ci = fiber.index_of(p.component)?;
    let comp = &fiber.components[ci];
    let eckardt = p.curves.len() == 3
        && !p.has_double
        && p.curves.iter().all(|&i| comp.curves.get(i).is_some_and(|c| c.kind == CurveKind::Line && c.line_mult() == 1));
    if !eckardt {
        return Err(Error::Invalid(format!("special point {point} is not an Eckardt point")));
    }
    let mut out = fiber.clone();
    let new_id = fiber.components.iter().map(|c| c.id).max().unwrap_or(0) + 1;
    let n = comp.rank();
    let s = &mut out.components[ci];
    if s.role != Role::WeakA1(0) {
        return Err(Error::Invalid(format!("Eckardt points are blown up on smooth cubics, not on {}", s.role)));
    }
    s.role = Role::Bl1Cubic;
    s.basis.push("f".into());
    for row in s.gram.iter_mut() {
        row.push(0);
    }
    let mut last = vec![0; n + 1];
    last[n] = -1;
    s.gram.push(last);
    s.k.push(1);
    let mut f = vec![0; n + 1];
    f[n] = 1;
    let mut moved = vec![];
    for (i, c) in s.curves.iter_mut().enumerate() {
        let old = c.class.clone();
        c.class.push(if p.curves.contains(&i) { -1 } else { 0 });
        if p.curves.contains(&i) {
            moved.push((old, c.class.clone()));
        }
    }
    for v in s.contracted.iter_mut() {
        v.push(0);
    }
    let mut ext = vec![];
    for v in &s.extremal {
        match moved.iter().find(|(o, _)| o == v) {
            Some((_, nv)) => ext.push(nv.clone()),
            None => {
                let mut w = v.clone();
                w.push(0);
                ext.push(w);
            }
        }
    }
    ext.push(f.clone());
    s.extremal = ext;
    let dcurve = s.curves.len();
    s.curves.push(CurveRecord::double(f, GlueRef { component: new_id, curve: 0 }));

    let pm = role_model(Role::P2Eckardt, &[])?;
    let mut plane = component_from_model(new_id, &pm, vec![], None);
    plane.curves.push(CurveRecord::double(vec![1], GlueRef { component: p.component, curve: dcurve }));
    for &i in &p.curves {
        let mut r = comp.curves[i].clone();
        r.class = vec![1];
        plane.curves.push(r);
    }
    out.components.push(plane);
    out.special_points.retain(|sp| sp != &p);
    out.provenance.push(format!("special point {point} blown up; plane component {new_id} attached"));
    refresh_special_points(&mut out);
    validate(&out)?;
    out.chamber = chamber_at(&out, qi(1))?;
    Ok(out)
}

/// Weight samples used for conservation checks: the top of the chamber and
/// four interior points.
pub fn chamber_samples(lo: crate::rational::Q, hi: crate::rational::Q) -> Vec<crate::rational::Q> {
    let w = hi - lo;
    vec![hi, lo + w * q(4, 5), lo + w * q(1, 2), lo + w * q(1, 3), lo + w * q(1, 7)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_names() {
        let l = |c: &[i64]| line_name(&LatticeVector::from_coeffs(c).unwrap());
        assert_eq!(l(&[0, 1, 0, 0, 0, 0, 0]), "e1");
        assert_eq!(l(&[1, 0, -1, 0, -1, 0, 0]), "l24");
        assert_eq!(l(&[2, -1, -1, 0, -1, -1, -1]), "c3");
        assert_eq!(l(&[2, -1, -1, -1, -1, -1]), "c");
    }

    #[test]
    fn unknown_label() {
        assert!(matches!(build_fiber("q7"), Err(Error::UnknownFiber(_))));
    }
}
