//! Wall-and-chamber structure in the constant weight `c`: sweep every
//! catalogued fiber downward through its stable models and collect the
//! weights where some model changes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::canonical::canonical_form;
use crate::catalog::{build_fiber, catalog_entry, CATALOG};
use crate::contraction::stable_model;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, serde_q, Interval, Q};
use crate::surface::{ample_interval, component_restriction, weight_floor, FiberComplex};

/// Fiber types swept independently. The Eckardt cubic enters through its
/// augmented model, which is its stable model near `c = 1`.
pub fn families(degree: u32) -> Vec<&'static str> {
    CATALOG.iter().filter(|e| e.degree == degree && e.fiber_type != "smooth3_eckardt_aug").map(|e| e.fiber_type).collect()
}

fn top_model(label: &str) -> Result<FiberComplex> {
    if label == "smooth3_eckardt" {
        let mut f = build_fiber("smooth3_eckardt_aug")?;
        f.fiber_type = label.into();
        return Ok(f);
    }
    build_fiber(label)
}

/// Stable models of a fiber type from `c = 1` down to the weight floor;
/// chambers are consecutive. Tier-2 types stop after their first chamber.
pub fn sweep(label: &str) -> Result<Vec<FiberComplex>> {
    static CACHE: OnceLock<Mutex<BTreeMap<String, Vec<FiberComplex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().expect("sweep cache").get(label) {
        return Ok(v.clone());
    }
    let mut cur = top_model(label)?;
    let floor = weight_floor(cur.degree)?;
    let mut out = vec![];
    loop {
        let lo = cur.chamber.0;
        let tier = cur.tier;
        out.push(cur.clone());
        if lo <= floor || tier != 1 {
            break;
        }
        let next = stable_model(&cur, lo)?;
        if next.chamber.1 != lo || next.chamber.0 >= lo {
            return Err(Error::Catalog(format!("{label}: stable model at {} does not extend below it", fmt_q(&lo))));
        }
        cur = next;
    }
    cache.lock().expect("sweep cache").insert(label.to_string(), out.clone());
    Ok(out)
}

/// The stable model of a fiber type at weight `c`.
pub fn chamber_model(label: &str, c: Q) -> Result<FiberComplex> {
    let entry = catalog_entry(label)?;
    let floor = weight_floor(entry.degree)?;
    if c <= floor || c > qi(1) {
        return Err(Error::WeightOutOfDomain(fmt_q(&c), format!("({}, 1]", fmt_q(&floor))));
    }
    let models = sweep(label)?;
    models.into_iter().find(|m| m.chamber_interval().contains(c)).ok_or_else(|| {
        Error::Invalid(format!("{label} is catalogued without curve data below c = {}", fmt_q(&c)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WallTag {
    Isomorphism,
    Contraction,
}

impl std::fmt::Display for WallTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WallTag::Isomorphism => "isomorphism",
            WallTag::Contraction => "contraction",
        })
    }
}

/// A formula breakpoint that is not a wall, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Screened {
    pub fiber_type: String,
    pub component: usize,
    #[serde(with = "serde_q")]
    pub value: Q,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberReport {
    #[serde(serialize_with = "interval_ser")]
    pub interval: Interval,
    /// Component counts of each fiber type's model on this chamber.
    pub models: BTreeMap<String, usize>,
    /// Role counts of each fiber type's model.
    pub roles: BTreeMap<String, BTreeMap<String, usize>>,
    /// Kind of the wall at the top of the chamber; none for the top chamber.
    pub crossing_tag: Option<WallTag>,
}

fn interval_ser<S: Serializer>(iv: &Interval, s: S) -> std::result::Result<S::Ok, S::Error> {
    [fmt_q(&iv.lo), fmt_q(&iv.hi)].serialize(s)
}

fn qs_ser<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
}

fn wit_ser<S: Serializer>(v: &BTreeMap<Q, Vec<String>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().rev().map(|(k, t)| (fmt_q(k), t.clone())).collect::<BTreeMap<_, _>>().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallReport {
    pub degree: u32,
    /// Strictly decreasing.
    #[serde(serialize_with = "qs_ser")]
    pub walls: Vec<Q>,
    pub chambers: Vec<ChamberReport>,
    /// Fiber types whose model changes at each wall.
    #[serde(serialize_with = "wit_ser")]
    pub witnesses: BTreeMap<Q, Vec<String>>,
    /// Walls seen by fibers carrying only restriction formulas.
    #[serde(serialize_with = "qs_ser")]
    pub tier2_walls: Vec<Q>,
    pub screened: Vec<Screened>,
}

impl WallReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }
}

/// Lower ends of the ample intervals of a fiber's stored restrictions.
fn formula_breakpoints(f: &FiberComplex) -> Result<Vec<(usize, Q)>> {
    let mut out = vec![];
    for comp in &f.components {
        let r = component_restriction(comp)?;
        for iv in ample_interval(comp, &r)? {
            if iv.lo > Q::from_integer(0) {
                out.push((comp.id, iv.lo));
            }
        }
    }
    Ok(out)
}

/// Walls of the given degree with chambers, witnesses and crossing tags.
pub fn compute_walls(degree: u32) -> Result<WallReport> {
    let floor = weight_floor(degree)?;
    let fams = families(degree);
    let sweeps: Vec<(String, Vec<FiberComplex>)> =
        fams.par_iter().map(|&l| sweep(l).map(|s| (l.to_string(), s))).collect::<Result<_>>()?;
    let mut witnesses: BTreeMap<Q, Vec<String>> = BTreeMap::new();
    let mut tier2: BTreeSet<Q> = BTreeSet::new();
    for (label, models) in &sweeps {
        for m in models.iter().filter(|m| m.chamber.0 > floor) {
            witnesses.entry(m.chamber.0).or_default().push(label.clone());
            if m.tier != 1 {
                tier2.insert(m.chamber.0);
            }
        }
    }
    let walls: Vec<Q> = witnesses.keys().rev().copied().collect();
    let mut screened = vec![];
    for (label, models) in &sweeps {
        for m in models {
            for (comp, b) in formula_breakpoints(m)? {
                if b <= floor || b > qi(1) || b == m.chamber.0 || walls.contains(&b) {
                    continue;
                }
                let reason = if b < m.chamber.0 {
                    format!("below the chamber ({}, {}] of the model carrying it", fmt_q(&m.chamber.0), fmt_q(&m.chamber.1))
                } else {
                    "inside the chamber; ampleness there is decided by another class".into()
                };
                screened.push(Screened { fiber_type: label.clone(), component: comp, value: b, reason });
            }
        }
    }
    screened.sort_by(|a, b| (b.value, &a.fiber_type, a.component).cmp(&(a.value, &b.fiber_type, b.component)));
    screened.dedup();
    let mut bounds = vec![qi(1)];
    bounds.extend(walls.iter().copied());
    bounds.push(floor);
    let mut chambers = vec![];
    for i in 0..bounds.len() - 1 {
        let (hi, lo) = (bounds[i], bounds[i + 1]);
        let mut models = BTreeMap::new();
        let mut roles = BTreeMap::new();
        for (label, ms) in &sweeps {
            if let Some(m) = ms.iter().find(|m| m.chamber_interval().contains(hi)) {
                models.insert(label.clone(), m.components.len());
                roles.insert(label.clone(), m.role_counts());
            }
        }
        let crossing_tag = if i == 0 { None } else { Some(classify_in(&sweeps, hi, lo, bounds[i - 1])) };
        chambers.push(ChamberReport { interval: Interval::chamber(lo, hi), models, roles, crossing_tag });
    }
    Ok(WallReport { degree, walls, chambers, witnesses, tier2_walls: tier2.into_iter().collect(), screened })
}

fn model_at(models: &[FiberComplex], c: Q) -> Option<&FiberComplex> {
    models.iter().find(|m| m.tier == 1 && m.chamber_interval().contains(c))
}

/// Contraction iff two fiber types with distinct models just above `w`
/// have isomorphic models just below it. Chambers are `(lo, hi]`, so `w`
/// itself lies below.
fn classify_in(sweeps: &[(String, Vec<FiberComplex>)], w: Q, below: Q, above: Q) -> WallTag {
    let (ca, cb) = ((w + above) / qi(2), (w + below) / qi(2));
    let forms: Vec<(String, String)> = sweeps
        .par_iter()
        .filter_map(|(_, ms)| match (model_at(ms, ca), model_at(ms, cb)) {
            (Some(a), Some(b)) => Some((canonical_form(a), canonical_form(b))),
            _ => None,
        })
        .collect();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            if forms[i].0 != forms[j].0 && forms[i].1 == forms[j].1 {
                return WallTag::Contraction;
            }
        }
    }
    WallTag::Isomorphism
}

pub fn classify_wall(degree: u32, wall: Q) -> Result<WallTag> {
    let report = compute_walls(degree)?;
    let i = report.walls.iter().position(|w| *w == wall).ok_or_else(|| Error::UnknownWall(fmt_q(&wall)))?;
    Ok(report.chambers[i + 1].crossing_tag.expect("below the top chamber"))
}
