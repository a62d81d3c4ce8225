//! Stable models at a wall: point collapse, ruled collapse, and internal
//! contraction, applied until every restriction is ample just below.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};
use crate::surface::{
    chamber_at, component_restriction, refresh_special_points, total_degree, validate, weight_floor, CurveKind,
    CurveRecord, FiberComplex, GlueRef, Role, SpecialPoint, SurfaceComponent,
};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Plan {
    Keep,
    Point,
    /// Fiber class of the ruling whose members are contracted.
    Ruled(Vec<i64>),
}

struct CompPlan {
    plan: Plan,
    /// Curve indices with degree dropping to zero at the wall.
    curves: BTreeSet<usize>,
    /// Extremal classes with degree dropping to zero that carry no record.
    extra: Vec<Vec<i64>>,
}

fn primitive(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (*x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.iter().map(|x| x / g.max(1)).collect()
}

fn plan_component(fiber: &FiberComplex, comp: &SurfaceComponent, w: Q) -> Result<CompPlan> {
    let r = component_restriction(comp)?;
    let rw = r.eval(w);
    if rw.iter().all(|x| x.is_zero()) {
        return Ok(CompPlan { plan: Plan::Point, curves: BTreeSet::new(), extra: vec![] });
    }
    let sq = comp.square_q(&rw);
    if sq.is_negative() {
        return Err(Error::Contraction(format!(
            "{}: restriction to component {} ({}) has negative square at c = {}",
            fiber.fiber_type,
            comp.id,
            comp.role,
            fmt_q(&w)
        )));
    }
    if sq.is_zero() {
        return Ok(CompPlan { plan: Plan::Ruled(primitive(&rw)), curves: BTreeSet::new(), extra: vec![] });
    }
    let dropping = |v: &[i64]| {
        let f = comp.pair_weighted(&r, v);
        f.eval(w).is_zero() && f.slope.is_positive()
    };
    let curves: BTreeSet<usize> = comp.curves.iter().enumerate().filter(|(_, c)| dropping(&c.class)).map(|(i, _)| i).collect();
    let recorded: BTreeSet<&Vec<i64>> = comp.curves.iter().map(|c| &c.class).collect();
    let mut extra: Vec<Vec<i64>> = vec![];
    for v in &comp.extremal {
        if !recorded.contains(v) && !comp.contracted.contains(v) && dropping(v) && !extra.contains(v) {
            extra.push(v.clone());
        }
    }
    Ok(CompPlan { plan: Plan::Keep, curves, extra })
}

/// The stable model of the fiber at the wall `w`, valid on a chamber
/// `(lo, w]`. Returns the input unchanged when nothing contracts at `w`.
pub fn stable_model(fiber: &FiberComplex, w: Q) -> Result<FiberComplex> {
    if fiber.tier != 1 {
        return Err(Error::Invalid(format!("{} carries no curve data (tier {})", fiber.fiber_type, fiber.tier)));
    }
    let floor = weight_floor(fiber.degree)?;
    if w <= floor || w > Q::from_integer(1) {
        return Err(Error::WeightOutOfDomain(fmt_q(&w), format!("({}, 1]", fmt_q(&floor))));
    }
    let before = total_degree(fiber, w)?;
    let mut cur = fiber.clone();
    let mut changed = false;
    for _ in 0..64 {
        match contraction_round(&cur, w)? {
            None => break,
            Some(next) => {
                cur = next;
                changed = true;
            }
        }
    }
    if !changed {
        return Ok(fiber.clone());
    }
    let after = total_degree(&cur, w)?;
    if after != before {
        return Err(Error::Contraction(format!(
            "{}: total degree changed from {} to {} at c = {}",
            fiber.fiber_type,
            fmt_q(&before),
            fmt_q(&after),
            fmt_q(&w)
        )));
    }
    validate(&cur)?;
    cur.chamber = chamber_at(&cur, w)?;
    Ok(cur)
}

fn contraction_round(fiber: &FiberComplex, w: Q) -> Result<Option<FiberComplex>> {
    let plans: Vec<CompPlan> = fiber.components.iter().map(|c| plan_component(fiber, c, w)).collect::<Result<_>>()?;
    if plans.iter().all(|p| p.plan == Plan::Keep && p.curves.is_empty() && p.extra.is_empty()) {
        return Ok(None);
    }
    let err = |m: String| Error::Contraction(format!("{} at c = {}: {m}", fiber.fiber_type, fmt_q(&w)));
    let idx: BTreeMap<usize, usize> = fiber.components.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
    let vanishing = |id: usize| plans[idx[&id]].plan != Plan::Keep;
    let contracted_on = |g: GlueRef| plans[idx[&g.component]].curves.contains(&g.curve);

    let mut g = fiber.clone();
    // Curves removed from surviving components, by component index.
    let mut removed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.components.len()];
    let mut new_points: Vec<SpecialPoint> = vec![];

    for (a, comp) in fiber.components.iter().enumerate() {
        let fiber_class = match &plans[a].plan {
            Plan::Keep => continue,
            Plan::Point => None,
            Plan::Ruled(f) => Some(f),
        };
        let degree_on = |v: &[i64]| fiber_class.map_or(0, |f| comp.pair(v, f));
        let mut sections = vec![];
        for (i, c) in comp.curves.iter().enumerate() {
            let Some(p) = c.glue else { continue };
            if c.kind != CurveKind::Double {
                continue;
            }
            let section = degree_on(&c.class) > 0;
            if vanishing(p.component) {
                if section {
                    return Err(err(format!(
                        "component {} collapses onto component {}, which also collapses",
                        comp.id, p.component
                    )));
                }
                continue;
            }
            if section {
                sections.push((i, p));
            } else if !contracted_on(p) {
                return Err(err(format!(
                    "component {} collapses but curve {} of component {} keeps positive degree",
                    comp.id, p.curve, p.component
                )));
            } else {
                g.components[idx[&p.component]].curves[p.curve].glue = None;
            }
        }
        if fiber_class.is_none() {
            continue;
        }
        let mut mult = 0u32;
        let mut labels = BTreeSet::new();
        for c in &comp.curves {
            if c.kind == CurveKind::Line {
                let d = degree_on(&c.class);
                if d > 0 {
                    mult += c.line_mult() * d as u32;
                    labels.extend(c.labels.iter().cloned());
                }
            }
        }
        match sections.as_slice() {
            [(i, p)] => {
                if degree_on(&comp.curves[*i].class) != 1 {
                    return Err(err(format!("base curve of component {} is not a section", comp.id)));
                }
                if contracted_on(*p) {
                    return Err(err(format!("image of component {} is itself contracted", comp.id)));
                }
                let target = &mut g.components[idx[&p.component]].curves[p.curve];
                target.glue = None;
                if mult > 0 {
                    target.kind = CurveKind::Line;
                    target.mult = Some(mult);
                    target.labels = labels.into_iter().collect();
                } else {
                    target.kind = CurveKind::Other;
                    target.mult = None;
                }
            }
            [(_, p), (_, q)] if mult == 0 => {
                g.components[idx[&p.component]].curves[p.curve].glue = Some(*q);
                g.components[idx[&q.component]].curves[q.curve].glue = Some(*p);
            }
            _ => {
                return Err(err(format!(
                    "component {} collapses with {} section curves and line degree {mult}",
                    comp.id,
                    sections.len()
                )));
            }
        }
    }

    for (b, comp) in fiber.components.iter().enumerate() {
        let plan = &plans[b];
        if plan.plan != Plan::Keep || (plan.curves.is_empty() && plan.extra.is_empty()) {
            continue;
        }
        for &i in &plan.curves {
            if let Some(p) = g.components[b].curves[i].glue {
                if !vanishing(p.component) && !contracted_on(p) {
                    return Err(err(format!(
                        "curve {i} of component {} contracts but its partner on {} does not",
                        comp.id, p.component
                    )));
                }
            }
        }
        let classes: Vec<Vec<i64>> =
            plan.curves.iter().map(|&i| comp.curves[i].class.clone()).chain(plan.extra.iter().cloned()).collect();
        for (x, u) in classes.iter().enumerate() {
            for v in &classes[x + 1..] {
                if comp.pair(u, v) != 0 {
                    return Err(err(format!("contracted curves on component {} meet", comp.id)));
                }
            }
        }
        for c in &classes {
            let through: Vec<usize> = (0..comp.curves.len())
                .filter(|i| !plan.curves.contains(i) && comp.pair(&comp.curves[*i].class, c) > 0)
                .collect();
            if through.len() >= 2 {
                new_points.push(SpecialPoint {
                    component: comp.id,
                    curves: through,
                    mults: vec![],
                    has_double: false,
                    doubles: 0,
                });
            }
        }
        let mut drop_coords = BTreeSet::new();
        let target = &mut g.components[b];
        for c in &classes {
            let sq = comp.pair(c, c);
            let unit = c.iter().filter(|x| **x != 0).count() == 1 && c.iter().any(|x| x.abs() == 1);
            let k = c.iter().position(|x| *x != 0).expect("nonzero class");
            let split = (0..comp.rank()).all(|j| j == k || comp.gram[k][j] == 0);
            if sq == -1 && unit && split {
                drop_coords.insert(k);
            } else if sq < 0 {
                target.contracted.push(c.clone());
            } else {
                return Err(err(format!(
                    "curve {} on component {} has square {sq} but degree zero",
                    comp.format_class(c),
                    comp.id
                )));
            }
        }
        removed[b].extend(plan.curves.iter().copied());
        if !drop_coords.is_empty() {
            blow_down(target, &drop_coords);
        }
        if target.contracted.iter().any(|c| c.iter().all(|x| *x == 0)) {
            return Err(err(format!("contracted class on component {} vanished", comp.id)));
        }
    }

    let keep: Vec<bool> = plans.iter().map(|p| p.plan == Plan::Keep).collect();
    compact(&mut g, &keep, &removed, new_points)?;
    for c in g.components.iter_mut() {
        c.role = updated_role(c)?;
    }
    refresh_special_points(&mut g);
    Ok(Some(g))
}

/// Removes basis coordinates of disjoint exceptional curves.
fn blow_down(c: &mut SurfaceComponent, drop: &BTreeSet<usize>) {
    let keep: Vec<usize> = (0..c.rank()).filter(|i| !drop.contains(i)).collect();
    let proj = |v: &Vec<i64>| -> Vec<i64> { keep.iter().map(|&i| v[i]).collect() };
    c.basis = keep.iter().map(|&i| c.basis[i].clone()).collect();
    c.gram = keep.iter().map(|&i| keep.iter().map(|&j| c.gram[i][j]).collect()).collect();
    c.k = proj(&c.k);
    for r in c.curves.iter_mut() {
        r.class = proj(&r.class);
    }
    let mut ext: Vec<Vec<i64>> = vec![];
    for v in c.extremal.iter().map(proj) {
        if v.iter().any(|x| *x != 0) && !ext.contains(&v) {
            ext.push(v);
        }
    }
    c.extremal = ext;
    c.contracted = c.contracted.iter().map(proj).collect();
}

/// Drops vanished components and removed curves, renumbering curve indices
/// in gluings and special points.
fn compact(g: &mut FiberComplex, keep: &[bool], removed: &[BTreeSet<usize>], extra: Vec<SpecialPoint>) -> Result<()> {
    let mut remap: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (b, comp) in g.components.iter().enumerate() {
        if !keep[b] {
            continue;
        }
        let mut n = 0;
        for i in 0..comp.curves.len() {
            if !removed[b].contains(&i) {
                remap.insert((comp.id, i), n);
                n += 1;
            }
        }
    }
    let mut comps = vec![];
    for (b, mut comp) in std::mem::take(&mut g.components).into_iter().enumerate() {
        if !keep[b] {
            continue;
        }
        let curves: Vec<CurveRecord> = comp
            .curves
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !removed[b].contains(i))
            .map(|(_, mut c)| {
                c.glue = c.glue.and_then(|p| remap.get(&(p.component, p.curve)).map(|&n| GlueRef { component: p.component, curve: n }));
                if c.kind == CurveKind::Double && c.glue.is_none() {
                    c.kind = CurveKind::Other;
                }
                c
            })
            .collect();
        comp.curves = curves;
        comps.push(comp);
    }
    g.components = comps;
    let mut pts = vec![];
    for mut p in std::mem::take(&mut g.special_points).into_iter().chain(extra) {
        p.curves = p.curves.iter().filter_map(|&i| remap.get(&(p.component, i)).copied()).collect();
        if p.curves.len() >= 2 {
            pts.push(p);
        }
    }
    g.special_points = pts;
    Ok(())
}

fn updated_role(c: &SurfaceComponent) -> Result<Role> {
    let r = c.rank();
    Ok(match c.role {
        Role::BlF0(_) => {
            if r < 2 {
                return Err(Error::Contraction(format!("component {} lost a ruling", c.id)));
            }
            Role::BlF0((r - 2) as u8)
        }
        Role::P2Eckardt => Role::P2Eckardt,
        Role::Bl1Cubic if r == 7 => Role::WeakA1(0),
        role if role.is_plane_model() && r == 1 => Role::P2,
        role if role.is_plane_model() && r == 2 => Role::Bl1P2,
        Role::WeakA1(k) if !c.contracted.is_empty() => Role::SingularA1(k),
        role => role,
    })
}
