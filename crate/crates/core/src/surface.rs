//! Component surfaces and fiber complexes with exact Picard data, and the
//! restriction of `K + cB` to each component.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, inertia, q, qi, solve, Affine, Interval, QuadRoots, Quadratic, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Minimal resolution of a cubic with `k` A1 points; `k = 0` is smooth.
    WeakA1(u8),
    /// `WeakA1(k)` with its (-2)-curves contracted.
    SingularA1(u8),
    WeakA2,
    /// `F0` blown up in `m` points of the diagonal.
    BlF0(u8),
    X,
    Z,
    M05,
    Bl1P2,
    P2,
    P2Eckardt,
    /// Smooth quartic del Pezzo surface.
    Dp4,
    /// Smooth cubic blown up at one point.
    Bl1Cubic,
}

impl Role {
    pub fn label(&self) -> String {
        match *self {
            Role::WeakA1(1) => "wS_A1".into(),
            Role::WeakA1(k) => format!("wS_{k}A1"),
            Role::SingularA1(1) => "S_A1".into(),
            Role::SingularA1(k) => format!("S_{k}A1"),
            Role::WeakA2 => "wS_A2".into(),
            Role::BlF0(0) => "F0".into(),
            Role::BlF0(m) => format!("Bl{m}F0"),
            Role::X => "X".into(),
            Role::Z => "Z".into(),
            Role::M05 => "M05".into(),
            Role::Bl1P2 => "Bl1P2".into(),
            Role::P2 => "P2".into(),
            Role::P2Eckardt => "P2_eckardt".into(),
            Role::Dp4 => "dP4".into(),
            Role::Bl1Cubic => "Bl1S3".into(),
        }
    }

    pub fn k_squared(&self) -> i64 {
        match *self {
            Role::WeakA1(_) | Role::SingularA1(_) | Role::WeakA2 => 3,
            Role::BlF0(m) => 8 - m as i64,
            Role::X | Role::Z | Role::Dp4 => 4,
            Role::M05 => 5,
            Role::Bl1P2 => 8,
            Role::P2 | Role::P2Eckardt => 9,
            Role::Bl1Cubic => 2,
        }
    }

    /// Whether the basis is `h, e1, ...` on a blown-up plane.
    pub fn is_plane_model(&self) -> bool {
        matches!(
            self,
            Role::WeakA1(_)
                | Role::SingularA1(_)
                | Role::WeakA2
                | Role::X
                | Role::Z
                | Role::M05
                | Role::Bl1P2
                | Role::P2
                | Role::P2Eckardt
                | Role::Dp4
                | Role::Bl1Cubic
        )
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("component role {s:?}"));
        let count = |t: &str| -> Result<u8> {
            if t.is_empty() {
                Ok(1)
            } else {
                t.parse().map_err(|_| bad())
            }
        };
        Ok(match s {
            "wS_A2" => Role::WeakA2,
            "F0" => Role::BlF0(0),
            "X" => Role::X,
            "Z" => Role::Z,
            "M05" => Role::M05,
            "Bl1P2" => Role::Bl1P2,
            "P2" => Role::P2,
            "P2_eckardt" => Role::P2Eckardt,
            "dP4" => Role::Dp4,
            "Bl1S3" => Role::Bl1Cubic,
            _ => {
                if let Some(t) = s.strip_prefix("wS_").and_then(|t| t.strip_suffix("A1")) {
                    Role::WeakA1(count(t)?)
                } else if let Some(t) = s.strip_prefix("S_").and_then(|t| t.strip_suffix("A1")) {
                    Role::SingularA1(count(t)?)
                } else if let Some(t) = s.strip_prefix("Bl").and_then(|t| t.strip_suffix("F0")) {
                    Role::BlF0(t.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Line,
    Double,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlueRef {
    pub component: usize,
    pub curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub class: Vec<i64>,
    pub kind: CurveKind,
    /// Lines only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueRef>,
    /// Marked lines lying on this curve; several after pushforward.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl CurveRecord {
    pub fn line(class: Vec<i64>, label: impl Into<String>) -> Self {
        CurveRecord { class, kind: CurveKind::Line, mult: Some(1), glue: None, labels: vec![label.into()] }
    }

    pub fn double(class: Vec<i64>, glue: GlueRef) -> Self {
        CurveRecord { class, kind: CurveKind::Double, mult: None, glue: Some(glue), labels: vec![] }
    }

    pub fn line_mult(&self) -> u32 {
        match self.kind {
            CurveKind::Line => self.mult.unwrap_or(1),
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub id: usize,
    pub role: Role,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    pub curves: Vec<CurveRecord>,
    pub extremal: Vec<Vec<i64>>,
    /// Classes of curves contracted to points of this component; the
    /// restriction is pulled back, i.e. orthogonal to all of them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contracted: Vec<Vec<i64>>,
    /// Stored restriction, used when no curve data is present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<WeightedClass>,
    /// Table row this component realizes, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
}

impl SurfaceComponent {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
    }

    pub fn pair_weighted(&self, w: &WeightedClass, v: &[i64]) -> Affine {
        let mut out = Affine::default();
        for (i, a) in w.entries.iter().enumerate() {
            let gv: i64 = (0..v.len()).map(|j| self.gram[i][j] * v[j]).sum();
            if gv != 0 {
                out += a.scale(qi(gv));
            }
        }
        out
    }

    pub fn square_weighted(&self, w: &WeightedClass) -> Quadratic {
        let mut out = Quadratic::default();
        for (i, a) in w.entries.iter().enumerate() {
            for (j, b) in w.entries.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 {
                    let p = *a * *b;
                    out = out + Quadratic { c0: p.c0 * qi(g), c1: p.c1 * qi(g), c2: p.c2 * qi(g) };
                }
            }
        }
        out
    }

    /// `R(c)·v` evaluated, for a rational vector `r`.
    pub fn pair_q(&self, r: &[Q], v: &[i64]) -> Q {
        let mut s = Q::zero();
        for (i, x) in r.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let gv: i64 = (0..v.len()).map(|j| self.gram[i][j] * v[j]).sum();
            s += *x * qi(gv);
        }
        s
    }

    pub fn square_q(&self, r: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..r.len() {
            for j in 0..r.len() {
                s += r[i] * r[j] * qi(self.gram[i][j]);
            }
        }
        s
    }

    pub fn live_curves(&self) -> impl Iterator<Item = (usize, &CurveRecord)> {
        self.curves.iter().enumerate()
    }

    /// Formats a class in this component's basis, e.g. `h1+h2-E1`.
    pub fn format_class(&self, v: &[i64]) -> String {
        let mut s = String::new();
        for (x, b) in v.iter().zip(&self.basis) {
            if *x == 0 {
                continue;
            }
            if *x < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if x.abs() != 1 {
                s.push_str(&x.abs().to_string());
            }
            s.push_str(b);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// Per basis element, `constant + slope * c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedClass {
    pub entries: Vec<Affine>,
}

impl WeightedClass {
    pub fn zero(n: usize) -> Self {
        WeightedClass { entries: vec![Affine::default(); n] }
    }

    /// `constant + slope * c` coordinatewise from integer vectors.
    pub fn from_parts(constant: &[i64], slope: &[i64]) -> Self {
        WeightedClass { entries: constant.iter().zip(slope).map(|(&a, &b)| Affine::ints(a, b)).collect() }
    }

    pub fn eval(&self, c: Q) -> Vec<Q> {
        self.entries.iter().map(|a| a.eval(c)).collect()
    }

    pub fn add_int(&mut self, v: &[i64], coeff: Affine) {
        for (e, x) in self.entries.iter_mut().zip(v) {
            if *x != 0 {
                *e += coeff.scale(qi(*x));
            }
        }
    }

    /// Human-readable form in a basis, e.g. `(-1+2c)h1 + (-1+2c)h2`.
    pub fn format(&self, basis: &[String]) -> String {
        let mut parts = vec![];
        for (a, b) in self.entries.iter().zip(basis) {
            if a.is_zero() {
                continue;
            }
            let coef = if a.slope.is_zero() {
                if a.constant == qi(1) {
                    String::new()
                } else if a.constant == qi(-1) {
                    "-".into()
                } else {
                    fmt_q(&a.constant)
                }
            } else if a.constant.is_zero() {
                let s = a.to_string();
                s.strip_suffix('c').map(|t| format!("{t}c·")).unwrap_or(s)
            } else {
                format!("({a})")
            };
            parts.push(format!("{coef}{b}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub component: usize,
    /// Curve indices on `component` passing through the point.
    pub curves: Vec<usize>,
    /// Multiplicities of the lines among `curves`.
    pub mults: Vec<u32>,
    pub has_double: bool,
    pub doubles: u32,
}

impl SpecialPoint {
    /// `(2 - #doubles) / sum(mults)`, or `None` when no line passes.
    pub fn c_max(&self) -> Option<Q> {
        let m: u32 = self.mults.iter().sum();
        if m == 0 {
            return None;
        }
        let d = self.doubles as i64;
        Some(if d >= 2 { Q::zero() } else { q(2 - d, m as i64) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberComplex {
    pub fiber_type: String,
    pub degree: u32,
    /// 1: full lattice data; 2: roles, counts and stored restrictions.
    pub tier: u8,
    #[serde(with = "chamber_serde")]
    pub chamber: (Q, Q),
    pub components: Vec<SurfaceComponent>,
    pub special_points: Vec<SpecialPoint>,
    pub special_points_complete: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

mod chamber_serde {
    use super::*;

    pub fn serialize<S: Serializer>(c: &(Q, Q), s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_q(&c.0), fmt_q(&c.1)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(Q, Q), D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let p = |s: &str| crate::rational::parse_rational(s).map_err(serde::de::Error::custom);
        Ok((p(&a)?, p(&b)?))
    }
}

/// Number of lines `N` for a degree.
pub fn line_count(degree: u32) -> Result<i64> {
    match degree {
        3 => Ok(27),
        4 => Ok(16),
        _ => Err(Error::Invalid(format!("degree {degree} is not 3 or 4"))),
    }
}

/// Bottom of the weight domain, `d / N`.
pub fn weight_floor(degree: u32) -> Result<Q> {
    Ok(q(degree as i64, line_count(degree)?))
}

/// `d ((N/d) c - 1)^2`.
pub fn expected_total_degree(degree: u32, c: Q) -> Result<Q> {
    let d = qi(degree as i64);
    let n = qi(line_count(degree)?);
    let t = n / d * c - qi(1);
    Ok(d * t * t)
}

impl FiberComplex {
    pub fn component(&self, id: usize) -> Result<&SurfaceComponent> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownComponent(format!("{} in fiber {}", id, self.fiber_type)))
    }

    pub fn index_of(&self, id: usize) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownComponent(format!("{} in fiber {}", id, self.fiber_type)))
    }

    pub fn chamber_interval(&self) -> Interval {
        Interval::chamber(self.chamber.0, self.chamber.1)
    }

    /// Role label counts, sorted by label.
    pub fn role_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for c in &self.components {
            *m.entry(c.role.label()).or_insert(0) += 1;
        }
        m
    }

    /// Marked line labels counted with multiplicity, identified across
    /// components.
    pub fn line_labels(&self) -> BTreeMap<String, u32> {
        let mut m: BTreeMap<String, u32> = BTreeMap::new();
        for comp in &self.components {
            for c in &comp.curves {
                if c.kind == CurveKind::Line {
                    let per = c.line_mult() / c.labels.len().max(1) as u32;
                    for l in &c.labels {
                        let e = m.entry(l.clone()).or_insert(0);
                        *e = (*e).max(per);
                    }
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `K + Σ doubles + c Σ mult·lines`, pulled back orthogonally to contracted
/// curves; the stored formula when the component has one.
pub fn polarization_restriction(fiber: &FiberComplex, comp_id: usize) -> Result<WeightedClass> {
    component_restriction(fiber.component(comp_id)?)
}

pub fn component_restriction(comp: &SurfaceComponent) -> Result<WeightedClass> {
    if let Some(f) = &comp.formula {
        return Ok(f.clone());
    }
    let mut r = WeightedClass::from_parts(&comp.k, &vec![0; comp.rank()]);
    for c in &comp.curves {
        match c.kind {
            CurveKind::Double => r.add_int(&c.class, Affine::ints(1, 0)),
            CurveKind::Line => r.add_int(&c.class, Affine::ints(0, c.line_mult() as i64)),
            CurveKind::Other => {}
        }
    }
    project_off(comp, r)
}

/// Subtracts the combination of contracted classes making `r` orthogonal to
/// all of them.
fn project_off(comp: &SurfaceComponent, r: WeightedClass) -> Result<WeightedClass> {
    let cs = &comp.contracted;
    if cs.is_empty() {
        return Ok(r);
    }
    let m: Vec<Vec<Q>> = cs.iter().map(|a| cs.iter().map(|b| qi(comp.pair(a, b))).collect()).collect();
    let dots: Vec<Affine> = cs.iter().map(|c| comp.pair_weighted(&r, c)).collect();
    let solve_part = |f: fn(&Affine) -> Q| {
        solve(&m, &dots.iter().map(f).collect::<Vec<_>>())
            .ok_or_else(|| Error::Contraction(format!("contracted classes on component {} are degenerate", comp.id)))
    };
    let a0 = solve_part(|a| a.constant)?;
    let a1 = solve_part(|a| a.slope)?;
    let mut out = r;
    for (k, c) in cs.iter().enumerate() {
        out.add_int(c, -Affine::new(a0[k], a1[k]));
    }
    Ok(out)
}

/// Classes tested by Nakai: stored extremal classes plus all curve classes,
/// minus contracted ones.
pub fn nakai_classes(comp: &SurfaceComponent) -> Vec<Vec<i64>> {
    let contracted: BTreeSet<&Vec<i64>> = comp.contracted.iter().collect();
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    for v in comp.extremal.iter().chain(comp.curves.iter().map(|c| &c.class)) {
        if v.iter().any(|x| *x != 0) && !contracted.contains(v) {
            out.insert(v.clone());
        }
    }
    out.into_iter().collect()
}

/// The exact set of `c` in `(0, 1]` where `d` is ample by Nakai over the
/// stored extremal classes.
pub fn ample_interval(comp: &SurfaceComponent, d: &WeightedClass) -> Result<Vec<Interval>> {
    if comp.extremal.is_empty() {
        return Err(Error::Catalog(format!("component {} ({}) has no extremal classes", comp.id, comp.role)));
    }
    let lin: Vec<Affine> = nakai_classes(comp).iter().map(|v| comp.pair_weighted(d, v)).collect();
    let quad = comp.square_weighted(d);
    let (lo, hi) = (Q::zero(), qi(1));
    let mut cuts: BTreeSet<Q> = [lo, hi].into_iter().collect();
    for f in &lin {
        if let Some(r) = f.root() {
            if r > lo && r < hi {
                cuts.insert(r);
            }
        }
    }
    if let QuadRoots::Rational(rs) = quad.roots() {
        cuts.extend(rs.into_iter().filter(|r| *r > lo && *r < hi));
    }
    let cuts: Vec<Q> = cuts.into_iter().collect();
    let lin_ok = |c: Q| lin.iter().all(|f| f.eval(c).is_positive());
    let ok = |c: Q| lin_ok(c) && quad.eval(c).is_positive();
    // Pieces in order: open gap (cuts[i], cuts[i+1]) then the point cuts[i+1].
    let mut pieces: Vec<(Q, Q, bool)> = vec![];
    for w in cuts.windows(2) {
        let mid = (w[0] + w[1]) / qi(2);
        if lin_ok(mid) && quad.has_root_in(w[0], w[1]) {
            return Err(Error::Catalog(format!(
                "irrational ampleness breakpoint on component {} in ({}, {})",
                comp.id,
                fmt_q(&w[0]),
                fmt_q(&w[1])
            )));
        }
        pieces.push((w[0], w[1], ok(mid)));
        pieces.push((w[1], w[1], ok(w[1])));
    }
    let mut out: Vec<Interval> = vec![];
    for (a, b, good) in pieces {
        if !good {
            continue;
        }
        let point = a == b;
        match out.last_mut() {
            Some(iv) if iv.hi == a && (iv.hi_closed != point) => {
                iv.hi = b;
                iv.hi_closed = point;
            }
            _ => out.push(Interval { lo: a, lo_closed: point, hi: b, hi_closed: point }),
        }
    }
    Ok(out)
}

/// Upper bound from catalogued special points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlcReport {
    #[serde(with = "opt_q")]
    pub c_max: Option<Q>,
    /// Index into `special_points` attaining the bound.
    pub witness: Option<usize>,
    /// False when the fiber's special-point list is marked incomplete.
    pub complete: bool,
}

mod opt_q {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        c.map(|x| fmt_q(&x)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::rational::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub fn slc_interval(fiber: &FiberComplex) -> SlcReport {
    let mut best: Option<(Q, usize)> = None;
    for (i, p) in fiber.special_points.iter().enumerate() {
        if let Some(c) = p.c_max() {
            if best.is_none_or(|(b, _)| c < b) {
                best = Some((c, i));
            }
        }
    }
    SlcReport { c_max: best.map(|b| b.0), witness: best.map(|b| b.1), complete: fiber.special_points_complete }
}

pub fn total_degree(fiber: &FiberComplex, c: Q) -> Result<Q> {
    let mut s = Q::zero();
    for comp in &fiber.components {
        let r = component_restriction(comp)?;
        s += comp.square_weighted(&r).eval(c);
    }
    Ok(s)
}

/// The total degree as a polynomial in `c`.
pub fn total_degree_form(fiber: &FiberComplex) -> Result<Quadratic> {
    let mut s = Quadratic::default();
    for comp in &fiber.components {
        let r = component_restriction(comp)?;
        s = s + comp.square_weighted(&r);
    }
    Ok(s)
}

/// Largest `b < hi` such that every restriction stays ample on `(b, hi]`,
/// or `None` when that holds down to the weight floor.
pub fn lower_breakpoint(fiber: &FiberComplex, hi: Q) -> Result<Option<Q>> {
    let floor = weight_floor(fiber.degree)?;
    let mut b = floor;
    let mut quads = vec![];
    for comp in &fiber.components {
        let r = component_restriction(comp)?;
        if comp.extremal.is_empty() {
            return Err(Error::Catalog(format!("component {} ({}) has no extremal classes", comp.id, comp.role)));
        }
        for v in nakai_classes(comp) {
            let f = comp.pair_weighted(&r, &v);
            if !f.eval(hi).is_positive() {
                return Err(Error::Catalog(format!(
                    "{}: restriction to component {} ({}) has degree {} on {} at c = {}",
                    fiber.fiber_type,
                    comp.id,
                    comp.role,
                    f,
                    comp.format_class(&v),
                    fmt_q(&hi)
                )));
            }
            if f.slope.is_positive() {
                b = b.max(f.root().expect("nonzero slope"));
            }
        }
        let sq = comp.square_weighted(&r);
        if !sq.eval(hi).is_positive() {
            return Err(Error::Catalog(format!(
                "{}: restriction to component {} ({}) has square {} at c = {}",
                fiber.fiber_type,
                comp.id,
                comp.role,
                sq,
                fmt_q(&hi)
            )));
        }
        if let QuadRoots::Rational(rs) = sq.roots() {
            if let Some(r) = rs.into_iter().filter(|r| *r < hi).max() {
                b = b.max(r);
            }
        }
        quads.push((comp.id, sq));
    }
    for (id, sq) in quads {
        if sq.roots() == QuadRoots::Irrational && sq.has_root_in(b, hi) {
            return Err(Error::Catalog(format!("{}: irrational breakpoint on component {id}", fiber.fiber_type)));
        }
    }
    let slc = slc_interval(fiber);
    if let Some(m) = slc.c_max {
        if m < hi {
            return Err(Error::Catalog(format!(
                "{}: slc fails above c = {} but the chamber reaches {}",
                fiber.fiber_type,
                fmt_q(&m),
                fmt_q(&hi)
            )));
        }
    }
    Ok((b > floor).then_some(b))
}

/// Recomputes line–line and line–double incidences from the classes, keeping
/// stored points through three or more curves.
pub fn refresh_special_points(fiber: &mut FiberComplex) {
    let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut keep = vec![];
    for p in &fiber.special_points {
        if p.curves.len() >= 3 {
            let mut cs = p.curves.clone();
            cs.sort_unstable();
            if seen.insert((p.component, cs)) {
                keep.push(p.clone());
            }
        }
    }
    for comp in &fiber.components {
        for (i, a) in comp.curves.iter().enumerate() {
            for (j, b) in comp.curves.iter().enumerate().skip(i + 1) {
                let lines = (a.kind == CurveKind::Line) as u8 + (b.kind == CurveKind::Line) as u8;
                let others = (a.kind == CurveKind::Other) as u8 + (b.kind == CurveKind::Other) as u8;
                if lines == 0 || others > 0 || comp.pair(&a.class, &b.class) <= 0 {
                    continue;
                }
                if seen.insert((comp.id, vec![i, j])) {
                    keep.push(SpecialPoint {
                        component: comp.id,
                        curves: vec![i, j],
                        mults: vec![],
                        has_double: false,
                        doubles: 0,
                    });
                }
            }
        }
    }
    for p in keep.iter_mut() {
        p.curves.sort_unstable();
        let comp = fiber.components.iter().find(|c| c.id == p.component).expect("point on a live component");
        p.mults = p.curves.iter().map(|&i| comp.curves[i].line_mult()).filter(|&m| m > 0).collect();
        p.doubles = p.curves.iter().filter(|&&i| comp.curves[i].kind == CurveKind::Double).count() as u32;
        p.has_double = p.doubles > 0;
    }
    keep.sort();
    fiber.special_points = keep;
}

/// One failed invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub component: Option<usize>,
    pub message: String,
}

/// Structural invariants: signatures, K², genus of curves, gluing symmetry,
/// perfect pairing of doubles, connectivity, and line counts.
pub fn check_fiber(fiber: &FiberComplex) -> Vec<Violation> {
    let mut out = vec![];
    let mut bad = |component: Option<usize>, message: String| out.push(Violation { component, message });
    let ids: BTreeSet<usize> = fiber.components.iter().map(|c| c.id).collect();
    if ids.len() != fiber.components.len() {
        bad(None, "duplicate component ids".into());
    }
    for comp in &fiber.components {
        let n = comp.rank();
        let id = Some(comp.id);
        if comp.gram.len() != n || comp.gram.iter().any(|r| r.len() != n) || comp.k.len() != n {
            bad(id, "basis, Gram and K have inconsistent sizes".into());
            continue;
        }
        if (0..n).any(|i| (0..n).any(|j| comp.gram[i][j] != comp.gram[j][i])) {
            bad(id, "Gram matrix is not symmetric".into());
        }
        if inertia(&comp.gram) != (1, n - 1, 0) {
            bad(id, format!("Gram signature {:?} is not hyperbolic", inertia(&comp.gram)));
        }
        let k2 = comp.pair(&comp.k, &comp.k);
        if k2 != comp.role.k_squared() {
            bad(id, format!("K^2 = {k2} but role {} needs {}", comp.role, comp.role.k_squared()));
        }
        for (i, c) in comp.curves.iter().enumerate() {
            if c.class.len() != n {
                bad(id, format!("curve {i} has the wrong rank"));
                continue;
            }
            let g = comp.pair(&c.class, &c.class) + comp.pair(&c.class, &comp.k);
            if g != -2 {
                bad(id, format!("curve {i} ({}) has C^2 + C.K = {g}", comp.format_class(&c.class)));
            }
            match c.kind {
                CurveKind::Line => {
                    if !matches!(c.mult, Some(m) if m >= 1) {
                        bad(id, format!("line {i} has multiplicity {:?}", c.mult));
                    }
                    if c.glue.is_some() {
                        bad(id, format!("line {i} carries a gluing"));
                    }
                }
                CurveKind::Double => match c.glue {
                    None => bad(id, format!("double curve {i} is not glued")),
                    Some(g) => {
                        let back = fiber
                            .components
                            .iter()
                            .find(|o| o.id == g.component)
                            .and_then(|o| o.curves.get(g.curve))
                            .and_then(|o| o.glue);
                        if g.component == comp.id || back != Some(GlueRef { component: comp.id, curve: i }) {
                            bad(id, format!("gluing of curve {i} is not symmetric"));
                        }
                    }
                },
                CurveKind::Other => {
                    if c.glue.is_some() || c.mult.is_some() {
                        bad(id, format!("curve {i} of kind other carries line or gluing data"));
                    }
                }
            }
        }
    }
    if fiber.tier == 1 && !fiber.components.is_empty() {
        let mut seen = BTreeSet::new();
        let mut stack = vec![fiber.components[0].id];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            if let Some(c) = fiber.components.iter().find(|c| c.id == x) {
                stack.extend(c.curves.iter().filter_map(|k| k.glue.map(|g| g.component)));
            }
        }
        if seen.len() != fiber.components.len() {
            bad(None, format!("gluing graph has {} of {} components reachable", seen.len(), fiber.components.len()));
        }
        if let Ok(n) = line_count(fiber.degree) {
            let labels = fiber.line_labels();
            if labels.len() as i64 != n {
                bad(None, format!("{} marked lines present, expected {n}", labels.len()));
            }
        }
    }
    out
}

pub fn validate(fiber: &FiberComplex) -> Result<()> {
    match check_fiber(fiber).first() {
        None => Ok(()),
        Some(v) => Err(Error::Catalog(format!(
            "{}: {}{}",
            fiber.fiber_type,
            v.component.map(|c| format!("component {c}: ")).unwrap_or_default(),
            v.message
        ))),
    }
}

/// Builds the stable interval `(lo, hi]` for a fiber stable at `hi`.
pub fn chamber_at(fiber: &FiberComplex, hi: Q) -> Result<(Q, Q)> {
    let lo = match lower_breakpoint(fiber, hi)? {
        Some(b) => b,
        None => weight_floor(fiber.degree)?,
    };
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0(r: (i64, i64, i64, i64)) -> SurfaceComponent {
        SurfaceComponent {
            id: 0,
            role: Role::BlF0(0),
            basis: vec!["h1".into(), "h2".into()],
            gram: vec![vec![0, 1], vec![1, 0]],
            k: vec![-2, -2],
            curves: vec![],
            extremal: vec![vec![1, 0], vec![0, 1]],
            contracted: vec![],
            formula: Some(WeightedClass::from_parts(&[r.0, r.2], &[r.1, r.3])),
            row: None,
        }
    }

    #[test]
    fn role_labels_round_trip() {
        for r in [
            Role::WeakA1(0),
            Role::WeakA1(1),
            Role::WeakA1(3),
            Role::SingularA1(2),
            Role::WeakA2,
            Role::BlF0(0),
            Role::BlF0(4),
            Role::X,
            Role::Z,
            Role::M05,
            Role::Bl1P2,
            Role::P2,
            Role::P2Eckardt,
            Role::Dp4,
            Role::Bl1Cubic,
        ] {
            assert_eq!(r.label().parse::<Role>().unwrap(), r);
        }
    }

    #[test]
    fn f0_interval() {
        let c = f0((-1, 2, -1, 2));
        let r = c.formula.clone().unwrap();
        let iv = ample_interval(&c, &r).unwrap();
        assert_eq!(iv, vec![Interval { lo: q(1, 2), lo_closed: false, hi: qi(1), hi_closed: true }]);
        assert_eq!(r.format(&c.basis), "(-1+2c)h1 + (-1+2c)h2");
    }

    #[test]
    fn empty_extremal_is_an_error() {
        let mut c = f0((-1, 2, -1, 2));
        c.extremal.clear();
        let r = c.formula.clone().unwrap();
        assert!(matches!(ample_interval(&c, &r), Err(Error::Catalog(_))));
    }

    #[test]
    fn slc_point_bounds() {
        let p = |mults: Vec<u32>, doubles: u32| SpecialPoint {
            component: 0,
            curves: vec![],
            has_double: doubles > 0,
            doubles,
            mults,
        };
        assert_eq!(p(vec![1, 1, 1], 0).c_max(), Some(q(2, 3)));
        assert_eq!(p(vec![2], 1).c_max(), Some(q(1, 2)));
        assert_eq!(p(vec![4], 1).c_max(), Some(q(1, 4)));
        assert_eq!(p(vec![1], 2).c_max(), Some(Q::zero()));
        assert_eq!(p(vec![], 2).c_max(), None);
    }

    #[test]
    fn expected_degrees() {
        assert_eq!(expected_total_degree(3, qi(1)).unwrap(), qi(192));
        assert_eq!(expected_total_degree(4, qi(1)).unwrap(), qi(36));
        assert_eq!(expected_total_degree(3, q(3, 5)).unwrap(), q(1452, 25));
    }
}
