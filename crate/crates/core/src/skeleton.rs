//! Combinatorial skeletons of fibers: components, double curves, lines and
//! their incidences, read off from root subsystems of the larger lattice.
//!
//! A component over a stratum `W` (a set of pairwise compatible boundary
//! vertices of the base) is a pairwise compatible set of non-horizontal
//! vertices of the total space whose targets cover `W` exactly, with one
//! vertex per element of `W` (a non-flat vertex counts twice).

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::complex::CompatibilityMode;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::roots::{bits, enumerate_vertex_subsystems, root_system, RootMask, RootSubsystem, VertexKind};

/// A boundary vertex of the total space together with the base vertices
/// its divisor maps onto.
#[derive(Clone, Debug)]
pub struct FiberVertex {
    pub kind: VertexKind,
    pub subsystem: RootSubsystem,
    /// Masks of base vertices; two for a non-flat vertex.
    pub targets: Vec<RootMask>,
    pub nonflat: bool,
}

impl FiberVertex {
    pub fn weight(&self) -> usize {
        1 + self.nonflat as usize
    }
}

/// Rank of the total-space lattice for a degree.
pub fn total_rank(degree: u32) -> Result<usize> {
    match degree {
        3 => Ok(7),
        4 => Ok(6),
        _ => Err(Error::Invalid(format!("degree {degree} is not 3 or 4"))),
    }
}

/// Non-horizontal vertices of the total space with their targets.
pub fn fiber_vertices(degree: u32) -> Result<&'static [FiberVertex]> {
    static D3: OnceLock<Vec<FiberVertex>> = OnceLock::new();
    static D4: OnceLock<Vec<FiberVertex>> = OnceLock::new();
    let cell = match degree {
        3 => &D3,
        4 => &D4,
        _ => return Err(Error::Invalid(format!("degree {degree} is not 3 or 4"))),
    };
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = compute_vertices(degree)?;
    Ok(cell.get_or_init(|| v))
}

/// Mask of the unique root of `m` orthogonal to all others in `m`.
fn isolated_roots(n: usize, m: RootMask) -> Result<Vec<RootMask>> {
    let rs = root_system(n)?;
    Ok(bits(m).filter(|&i| m & !(rs.orth_mask(i) | 1 << i) == 0).map(|i| 1 << i).collect())
}

fn compute_vertices(degree: u32) -> Result<Vec<FiberVertex>> {
    let n = total_rank(degree)?;
    let base = n - 1;
    let base_kinds = VertexKind::vertex_kinds(base)?;
    let mut out = vec![];
    for &kind in VertexKind::vertex_kinds(n)? {
        for s in enumerate_vertex_subsystems(n, kind)? {
            let r = s.restrict()?;
            if r.is_empty() {
                continue;
            }
            let ty = r.dynkin_type().to_string();
            let containing = |k: VertexKind| -> Result<Vec<RootMask>> {
                Ok(enumerate_vertex_subsystems(base, k)?
                    .iter()
                    .filter(|b| r.mask() & !b.mask() == 0)
                    .map(|b| b.mask())
                    .collect())
            };
            let contained = |k: VertexKind| -> Result<Vec<RootMask>> {
                Ok(enumerate_vertex_subsystems(base, k)?
                    .iter()
                    .filter(|b| b.mask() & !r.mask() == 0)
                    .map(|b| b.mask())
                    .collect())
            };
            let (targets, nonflat) = match (degree, kind, ty.as_str()) {
                (3, VertexKind::A1, _) | (3, VertexKind::A2, "A1") => (vec![r.mask()], false),
                (3, VertexKind::A2, "A2") | (3, VertexKind::A3Squared, "A2×A2") => {
                    (containing(VertexKind::A2Cubed)?, false)
                }
                (3, VertexKind::A3Squared, "A1×A1×A3") => (isolated_roots(base, r.mask())?, true),
                (3, VertexKind::A7, "A1×A5") => (isolated_roots(base, r.mask())?, false),
                (4, VertexKind::A1, _) => (containing(VertexKind::D2)?, false),
                (4, VertexKind::A2Cubed, _) => (contained(VertexKind::D2)?, false),
                _ => {
                    return Err(Error::Invalid(format!("no fiber rule for {kind} restricting to {ty}")));
                }
            };
            let expected = 1 + nonflat as usize;
            let known: BTreeSet<RootMask> = base_kinds
                .iter()
                .map(|&k| enumerate_vertex_subsystems(base, k))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .map(|b| b.mask())
                .collect();
            if targets.len() != expected || !targets.iter().all(|t| known.contains(t)) {
                return Err(Error::Invalid(format!(
                    "{kind} {:?} has {} targets, expected {expected}",
                    s.labels(),
                    targets.len()
                )));
            }
            out.push(FiberVertex { kind, subsystem: s.clone(), targets, nonflat });
        }
    }
    Ok(out)
}

/// Horizontal A1 vertices of the total space: one per line of the fiber.
pub fn horizontal_vertices(degree: u32) -> Result<Vec<RootSubsystem>> {
    let n = total_rank(degree)?;
    let mut out = vec![];
    for s in enumerate_vertex_subsystems(n, VertexKind::A1)? {
        if s.restrict()?.is_empty() {
            out.push(s.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SkeletonComponent {
    /// Indices into [`fiber_vertices`].
    pub vertices: Vec<usize>,
    /// Vertex kinds, sorted.
    pub kinds: Vec<String>,
    /// Number of containment pairs among the vertices.
    pub nested: usize,
    pub has_nonflat: bool,
    /// Horizontal roots of the lines on this component.
    pub lines: Vec<String>,
    /// Neighboring components, one double curve each.
    pub neighbors: Vec<usize>,
    /// Meeting pairs among curves indexed lines first, then doubles.
    pub meets: BTreeSet<(usize, usize)>,
}

impl SkeletonComponent {
    pub fn curve_count(&self) -> usize {
        self.lines.len() + self.neighbors.len()
    }

    pub fn meet(&self, a: usize, b: usize) -> bool {
        self.meets.contains(&(a.min(b), a.max(b)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Skeleton {
    pub degree: u32,
    pub components: Vec<SkeletonComponent>,
}

fn compatible(a: &RootSubsystem, b: &RootSubsystem) -> bool {
    CompatibilityMode::Geometric.compatible(a, b).expect("same ambient rank")
}

fn pairwise_compatible(vs: &[FiberVertex], set: &BTreeSet<usize>) -> bool {
    let v: Vec<usize> = set.iter().copied().collect();
    v.iter().enumerate().all(|(i, &a)| v[i + 1..].iter().all(|&b| compatible(&vs[a].subsystem, &vs[b].subsystem)))
}

/// The skeleton of the fiber over the stratum with base vertices `stratum`.
pub fn fiber_skeleton(degree: u32, stratum: &[RootMask]) -> Result<Skeleton> {
    let vs = fiber_vertices(degree)?;
    let w: BTreeSet<RootMask> = stratum.iter().copied().collect();
    if w.is_empty() || w.len() != stratum.len() {
        return Err(Error::Invalid("stratum must be a nonempty set of base vertices".into()));
    }
    let cand: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].targets.iter().all(|t| w.contains(t))).collect();
    let mut sets: Vec<Vec<usize>> = vec![];
    search(vs, &cand, 0, &mut vec![], &w, &mut sets);
    if sets.is_empty() {
        return Err(Error::Invalid("stratum has an empty fiber; are its vertices compatible?".into()));
    }
    let hs = horizontal_vertices(degree)?;
    let n = total_rank(degree)?;
    let rs = root_system(n)?;
    let line_label = |h: &RootSubsystem| -> String { rs.labels(h.mask()).remove(0) };
    let set_of = |i: usize| -> BTreeSet<usize> { sets[i].iter().copied().collect() };
    let mut components = vec![];
    for (ci, c) in sets.iter().enumerate() {
        let mine = set_of(ci);
        let lines: Vec<usize> =
            (0..hs.len()).filter(|&h| c.iter().all(|&i| compatible(&vs[i].subsystem, &hs[h]))).collect();
        let neighbors: Vec<usize> = (0..sets.len())
            .filter(|&cj| {
                if cj == ci {
                    return false;
                }
                let u: BTreeSet<usize> = mine.union(&set_of(cj)).copied().collect();
                u.len() == c.len().max(sets[cj].len()) + 1 && pairwise_compatible(vs, &u)
            })
            .collect();
        let nl = lines.len();
        let mut meets = BTreeSet::new();
        for a in 0..nl + neighbors.len() {
            for b in a + 1..nl + neighbors.len() {
                let m = match (a < nl, b < nl) {
                    (true, true) => hs[lines[a]].is_orthogonal_to(&hs[lines[b]])?,
                    (true, false) => {
                        let u: BTreeSet<usize> = mine.union(&set_of(neighbors[b - nl])).copied().collect();
                        u.iter().all(|&i| compatible(&vs[i].subsystem, &hs[lines[a]]))
                    }
                    (false, false) => {
                        let u: BTreeSet<usize> = mine
                            .union(&set_of(neighbors[a - nl]))
                            .copied()
                            .collect::<BTreeSet<_>>()
                            .union(&set_of(neighbors[b - nl]))
                            .copied()
                            .collect();
                        pairwise_compatible(vs, &u)
                    }
                    (false, true) => unreachable!("lines come first"),
                };
                if m {
                    meets.insert((a, b));
                }
            }
        }
        let mut kinds: Vec<String> = c.iter().map(|&i| vs[i].kind.label().to_string()).collect();
        kinds.sort();
        let mut nested = 0;
        for (x, &a) in c.iter().enumerate() {
            for &b in &c[x + 1..] {
                let (sa, sb) = (&vs[a].subsystem, &vs[b].subsystem);
                if sa.contains(sb)? || sb.contains(sa)? {
                    nested += 1;
                }
            }
        }
        components.push(SkeletonComponent {
            vertices: c.clone(),
            kinds,
            nested,
            has_nonflat: c.iter().any(|&i| vs[i].nonflat),
            lines: lines.iter().map(|&h| line_label(&hs[h])).collect(),
            neighbors,
            meets,
        });
    }
    Ok(Skeleton { degree, components })
}

fn search(
    vs: &[FiberVertex],
    cand: &[usize],
    start: usize,
    cur: &mut Vec<usize>,
    w: &BTreeSet<RootMask>,
    out: &mut Vec<Vec<usize>>,
) {
    let weight: usize = cur.iter().map(|&i| vs[i].weight()).sum();
    if weight >= w.len() {
        let u: BTreeSet<RootMask> = cur.iter().flat_map(|&i| vs[i].targets.iter().copied()).collect();
        if weight == w.len() && &u == w {
            out.push(cur.clone());
        }
        return;
    }
    for x in start..cand.len() {
        let i = cand[x];
        if cur.iter().all(|&j| compatible(&vs[i].subsystem, &vs[j].subsystem)) {
            cur.push(i);
            search(vs, cand, x + 1, cur, w, out);
            cur.pop();
        }
    }
}

/// The root of an A1 vertex of the base, as a lattice vector.
pub fn a1_root(v: &FiberVertex) -> Result<LatticeVector> {
    let r = v.subsystem.restrict()?;
    if r.len() != 1 {
        return Err(Error::Invalid(format!("{} vertex does not restrict to a single root", v.kind)));
    }
    Ok(r.roots().remove(0))
}

/// Mask of the base vertex with the given root labels, e.g. `["7"]` or the
/// generators of an `A2^3`.
pub fn base_vertex(degree: u32, kind: VertexKind, labels: &[&str]) -> Result<RootMask> {
    let base = total_rank(degree)? - 1;
    let want = crate::roots::closure_of_labels(base, labels)?;
    enumerate_vertex_subsystems(base, kind)?
        .iter()
        .find(|b| b.mask() & want.mask() == want.mask())
        .map(|b| b.mask())
        .ok_or_else(|| Error::Invalid(format!("no {kind} vertex contains {labels:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizontal_counts() {
        assert_eq!(horizontal_vertices(3).unwrap().len(), 27);
        assert_eq!(horizontal_vertices(4).unwrap().len(), 16);
    }

    #[test]
    fn type_a_skeleton() {
        let w = base_vertex(3, VertexKind::A1, &["123456"]).unwrap();
        let s = fiber_skeleton(3, &[w]).unwrap();
        assert_eq!(s.components.len(), 8);
        let d = base_vertex(4, VertexKind::D2, &["45", "123"]).unwrap();
        assert_eq!(fiber_skeleton(4, &[d]).unwrap().components.len(), 6);
    }
}
