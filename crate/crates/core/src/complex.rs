//! Boundary complexes `R(E_n)`: flag complexes on vertex subsystems under a
//! compatibility predicate, with the E7 exclusion of orthogonal 7-tuples of
//! A1 vertices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{enumerate_vertex_subsystems, RootSubsystem, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[derive(Default)]
pub enum CompatibilityMode {
    /// Orthogonal or sharing no root.
    Verbatim,
    /// Orthogonal or nested.
    #[default]
    Geometric,
    OrthogonalOnly,
}

impl CompatibilityMode {
    pub fn name(self) -> &'static str {
        match self {
            CompatibilityMode::Verbatim => "verbatim",
            CompatibilityMode::Geometric => "geometric",
            CompatibilityMode::OrthogonalOnly => "orthogonal-only",
        }
    }

    pub fn compatible(self, a: &RootSubsystem, b: &RootSubsystem) -> Result<bool> {
        let orth = a.is_orthogonal_to(b)?;
        Ok(match self {
            CompatibilityMode::Verbatim => orth || a.is_disjoint_from(b)?,
            CompatibilityMode::Geometric => orth || a.contains(b)? || b.contains(a)?,
            CompatibilityMode::OrthogonalOnly => orth,
        })
    }
}


impl fmt::Display for CompatibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompatibilityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(CompatibilityMode::Verbatim),
            "geometric" => Ok(CompatibilityMode::Geometric),
            "orthogonal-only" | "orthogonal" => Ok(CompatibilityMode::OrthogonalOnly),
            _ => Err(Error::Parse(format!("compatibility mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub kind: VertexKind,
    pub subsystem: RootSubsystem,
}

/// A flag complex stored as its compatibility graph; faces are cliques.
#[derive(Clone, Debug)]
pub struct BoundaryComplex {
    ambient_n: usize,
    mode: CompatibilityMode,
    vertices: Vec<Vertex>,
    /// Bitset adjacency rows.
    adj: Vec<Vec<u64>>,
}

/// Size of an orthogonal A1 family that may not span a face in rank 7.
const EXCLUDED_ORTHOGONAL_A1: usize = 7;

impl BoundaryComplex {
    pub fn build(ambient_n: usize, mode: CompatibilityMode) -> Result<Self> {
        let mut vertices = Vec::new();
        for &kind in VertexKind::vertex_kinds(ambient_n)? {
            for s in enumerate_vertex_subsystems(ambient_n, kind)? {
                vertices.push(Vertex { kind, subsystem: s.clone() });
            }
        }
        let words = vertices.len().div_ceil(64);
        let adj: Vec<Vec<u64>> = (0..vertices.len())
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                for (j, w) in vertices.iter().enumerate() {
                    if i != j
                        && mode
                            .compatible(&vertices[i].subsystem, &w.subsystem)
                            .expect("same ambient rank")
                    {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        Ok(Self { ambient_n, mode, vertices, adj })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn mode(&self) -> CompatibilityMode {
        self.mode
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn vertex_counts_by_type(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for v in &self.vertices {
            *m.entry(v.kind.label().to_string()).or_insert(0) += 1;
        }
        m
    }

    /// Whether the vertex set spans a face.
    pub fn is_face(&self, face: &[usize]) -> bool {
        for (x, &i) in face.iter().enumerate() {
            for &j in &face[x + 1..] {
                if i == j || !self.are_adjacent(i, j) {
                    return false;
                }
            }
        }
        !self.excluded(face)
    }

    fn excluded(&self, face: &[usize]) -> bool {
        if self.ambient_n != 7 {
            return false;
        }
        let a1: Vec<&RootSubsystem> = face
            .iter()
            .filter(|&&i| self.vertices[i].kind == VertexKind::A1)
            .map(|&i| &self.vertices[i].subsystem)
            .collect();
        if a1.len() < EXCLUDED_ORTHOGONAL_A1 {
            return false;
        }
        has_orthogonal_family(&a1, EXCLUDED_ORTHOGONAL_A1)
    }

    /// Number of faces of dimension `dim`.
    pub fn count_faces(&self, dim: usize) -> u64 {
        self.count_faces_where(dim, |_| true)
    }

    /// Number of faces of dimension `dim` all of whose vertices pass `keep`.
    pub fn count_faces_where(&self, dim: usize, keep: impl Fn(&Vertex) -> bool + Sync) -> u64 {
        let words = self.adj.first().map_or(0, Vec::len);
        let mut allowed = vec![0u64; words];
        for (i, v) in self.vertices.iter().enumerate() {
            if keep(v) {
                allowed[i / 64] |= 1 << (i % 64);
            }
        }
        let size = dim + 1;
        (0..self.vertices.len())
            .into_par_iter()
            .filter(|&i| allowed[i / 64] >> (i % 64) & 1 == 1)
            .map(|i| {
                let cand = above(&and(&allowed, &self.adj[i]), i);
                let mut face = vec![i];
                self.count_from(&cand, size - 1, &mut face)
            })
            .sum()
    }

    fn count_from(&self, cand: &[u64], left: usize, face: &mut Vec<usize>) -> u64 {
        if left == 0 {
            return u64::from(!self.excluded(face));
        }
        // Exclusion only matters for faces of at least 7 vertices.
        if left == 1 && (self.ambient_n != 7 || face.len() + 1 < EXCLUDED_ORTHOGONAL_A1) {
            return cand.iter().map(|w| u64::from(w.count_ones())).sum();
        }
        let mut total = 0;
        for j in iter_bits(cand) {
            let next = above(&and(cand, &self.adj[j]), j);
            face.push(j);
            total += self.count_from(&next, left - 1, face);
            face.pop();
        }
        total
    }

    /// Face counts for dimensions `0..=max_dim`.
    pub fn f_vector_prefix(&self, max_dim: usize) -> Vec<u64> {
        (0..=max_dim).map(|d| self.count_faces(d)).collect()
    }

    pub fn report(&self, max_dim: usize) -> ComplexReport {
        ComplexReport {
            n: self.ambient_n,
            mode: self.mode,
            vertex_counts_by_type: self.vertex_counts_by_type(),
            f_vector_prefix: self.f_vector_prefix(max_dim),
        }
    }
}

/// Default f-vector depth per rank; deeper entries of `R(E7)` are expensive.
pub fn default_report_depth(n: usize) -> usize {
    match n {
        5 => 2,
        6 => 3,
        _ => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub n: usize,
    pub mode: CompatibilityMode,
    pub vertex_counts_by_type: BTreeMap<String, usize>,
    pub f_vector_prefix: Vec<u64>,
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Bits strictly above position `i`.
fn above(set: &[u64], i: usize) -> Vec<u64> {
    let mut out = set.to_vec();
    let w = i / 64;
    out[..w].iter_mut().for_each(|x| *x = 0);
    let b = i % 64;
    out[w] &= if b == 63 { 0 } else { !0u64 << (b + 1) };
    out
}

fn iter_bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter()
        .enumerate()
        .flat_map(|(w, &word)| crate::roots::bits(word).map(move |b| w * 64 + b))
}

fn has_orthogonal_family(subs: &[&RootSubsystem], k: usize) -> bool {
    fn go(subs: &[&RootSubsystem], start: usize, chosen: &mut Vec<usize>, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..subs.len() {
            if chosen.iter().all(|&c| subs[c].orthogonal_unchecked(subs[i])) {
                chosen.push(i);
                if go(subs, i + 1, chosen, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(subs, 0, &mut Vec::new(), k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts() {
        let c5 = BoundaryComplex::build(5, CompatibilityMode::Geometric).unwrap();
        assert_eq!(c5.count_faces(0), 10);
        let c6 = BoundaryComplex::build(6, CompatibilityMode::Geometric).unwrap();
        assert_eq!(c6.vertices().len(), 76);
        assert_eq!(c6.vertex_counts_by_type()["A1"], 36);
        assert_eq!(c6.vertex_counts_by_type()["A2^3"], 40);
    }

    #[test]
    fn orthogonal_only_faces() {
        let c5 = BoundaryComplex::build(5, CompatibilityMode::OrthogonalOnly).unwrap();
        assert_eq!(c5.count_faces(1), 15);
        let c6 = BoundaryComplex::build(6, CompatibilityMode::OrthogonalOnly).unwrap();
        assert_eq!(c6.count_faces_where(3, |v| v.kind == VertexKind::A1), 135);
    }

    #[test]
    fn faces_are_pairwise_compatible() {
        let c6 = BoundaryComplex::build(6, CompatibilityMode::Geometric).unwrap();
        for i in 0..c6.vertices().len() {
            for j in 0..c6.vertices().len() {
                assert_eq!(c6.are_adjacent(i, j), c6.are_adjacent(j, i));
            }
        }
        // An A1 lies in exactly ten A2^3 subsystems.
        let a1 = c6.vertices().iter().position(|v| v.kind == VertexKind::A1).unwrap();
        let hits = (0..c6.vertices().len())
            .filter(|&j| c6.vertices()[j].kind == VertexKind::A2Cubed && c6.are_adjacent(a1, j))
            .count();
        assert_eq!(hits, 10);
    }

    #[test]
    fn mode_parsing() {
        for m in [CompatibilityMode::Verbatim, CompatibilityMode::Geometric, CompatibilityMode::OrthogonalOnly] {
            assert_eq!(m.name().parse::<CompatibilityMode>().unwrap(), m);
        }
        assert!("loose".parse::<CompatibilityMode>().is_err());
    }
}
