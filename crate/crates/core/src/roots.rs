//! Root subsystems of E5 = D5, E6 and E7 inside the lattice.
//!
//! A subsystem is a set of positive roots closed under the reflections it
//! generates, stored as a bitmask over the canonical positive-root order
//! (E7 has 63 positive roots, so a `u64` suffices).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{check_enum_rank, enumerate_roots, LatticeVector, MIN_RANK};

pub type RootMask = u64;

/// Iterate the set bits of a mask in increasing order.
pub fn bits(mut m: RootMask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Precomputed tables for the positive roots of one ambient rank.
#[derive(Debug)]
pub struct RootSystem {
    n: usize,
    roots: Vec<LatticeVector>,
    index: HashMap<LatticeVector, usize>,
    gram: Vec<Vec<i64>>,
    /// `refl[i][j]` is the index of `±s_i(r_j)`.
    refl: Vec<Vec<u8>>,
    /// `sum[j][k]` is the index of `r_j + r_k` when that is a positive root.
    sum: Vec<Vec<Option<u8>>>,
    orth: Vec<RootMask>,
}

impl RootSystem {
    fn build(n: usize) -> Result<Self> {
        let roots = enumerate_roots(n)?;
        let index: HashMap<_, _> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let lookup = |v: &LatticeVector| -> Option<usize> {
            index.get(v).copied().or_else(|| index.get(&-v).copied())
        };
        let gram: Vec<Vec<i64>> = roots
            .iter()
            .map(|a| roots.iter().map(|b| a.dot(b)).collect())
            .collect();
        let mut refl = vec![vec![0u8; roots.len()]; roots.len()];
        let mut sum = vec![vec![None; roots.len()]; roots.len()];
        let mut orth = vec![0; roots.len()];
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                let img = b + &(gram[i][j] * a);
                refl[i][j] = lookup(&img).expect("reflection of a root is a root") as u8;
                sum[i][j] = index.get(&(a + b)).map(|&k| k as u8);
                if gram[i][j] == 0 {
                    orth[i] |= 1 << j;
                }
            }
        }
        Ok(Self { n, roots, index, gram, refl, sum, orth })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn full_mask(&self) -> RootMask {
        if self.roots.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.roots.len()) - 1
        }
    }

    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &LatticeVector {
        &self.roots[i]
    }

    /// Index of `v` or `-v` among the positive roots.
    pub fn index_of(&self, v: &LatticeVector) -> Option<usize> {
        self.index.get(v).copied().or_else(|| self.index.get(&-v).copied())
    }

    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    /// Mask of positive roots orthogonal to root `i`.
    pub fn orth_mask(&self, i: usize) -> RootMask {
        self.orth[i]
    }

    /// Mask of positive roots orthogonal to every root of `m`.
    pub fn orth_of(&self, m: RootMask) -> RootMask {
        bits(m).fold(self.full_mask(), |acc, i| acc & self.orth[i])
    }

    /// Image of a mask under the reflection in root `i`.
    pub fn reflect_mask(&self, i: usize, m: RootMask) -> RootMask {
        bits(m).fold(0, |acc, j| acc | 1 << self.refl[i][j])
    }

    /// Smallest reflection-closed mask containing `m`.
    pub fn close(&self, mut m: RootMask) -> RootMask {
        loop {
            let mut next = m;
            for i in bits(m) {
                let row = &self.refl[i];
                for j in bits(m) {
                    next |= 1 << row[j];
                }
            }
            if next == m {
                return m;
            }
            m = next;
        }
    }

    /// Positive roots of `m` that are not a sum of two positive roots of `m`.
    pub fn simple_roots(&self, m: RootMask) -> RootMask {
        let mut decomposable = 0;
        for j in bits(m) {
            for k in bits(m) {
                if let Some(s) = self.sum[j][k] {
                    decomposable |= 1 << s;
                }
            }
        }
        m & !decomposable
    }

    /// Indices of the simple reflections `e_i - e_{i+1}` and `h - e1 - e2 - e3`.
    pub fn simple_reflections(&self) -> Vec<usize> {
        simple_reflection_generators(self.n)
            .expect("rank checked at construction")
            .iter()
            .map(|g| self.index[g])
            .collect()
    }

    pub fn labels(&self, m: RootMask) -> Vec<String> {
        bits(m)
            .map(|i| self.roots[i].root_label().expect("positive root"))
            .collect()
    }
}

/// Shared tables for rank `n` in `5..=7`.
pub fn root_system(n: usize) -> Result<&'static RootSystem> {
    static CACHE: [OnceLock<RootSystem>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    check_enum_rank(n)?;
    Ok(CACHE[n - MIN_RANK].get_or_init(|| RootSystem::build(n).expect("rank checked")))
}

/// Generators of the Weyl group used for invariance checks.
pub fn simple_reflection_generators(n: usize) -> Result<Vec<LatticeVector>> {
    check_enum_rank(n)?;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let mut ms = vec![0; n];
        ms[i] = 1;
        ms[i + 1] = -1;
        out.push(LatticeVector::new(0, &ms)?);
    }
    let mut ms = vec![0; n];
    ms[..3].iter_mut().for_each(|m| *m = -1);
    out.push(LatticeVector::new(1, &ms)?);
    Ok(out)
}

/// `v + (v.a) a`, the reflection in the root `a`.
pub fn reflect(v: &LatticeVector, alpha: &LatticeVector) -> Result<LatticeVector> {
    if !alpha.is_root() {
        return Err(Error::NotARoot(alpha.to_string()));
    }
    let t = v.pairing(alpha)?;
    Ok(v + &(t * alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

/// Product of irreducible Dynkin types, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType(Vec<(Family, usize)>);

impl DynkinType {
    pub fn new(mut factors: Vec<(Family, usize)>) -> Self {
        factors.sort();
        Self(factors)
    }

    pub fn factors(&self) -> &[(Family, usize)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|f| f.1).sum()
    }

    /// Number of positive roots of the type.
    pub fn positive_root_count(&self) -> usize {
        self.0
            .iter()
            .map(|&(f, k)| match (f, k) {
                (Family::A, k) => k * (k + 1) / 2,
                (Family::D, k) => k * (k - 1),
                (Family::E, 6) => 36,
                (Family::E, 7) => 63,
                (Family::E, 8) => 120,
                _ => unreachable!("unsupported E rank"),
            })
            .sum()
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("empty");
        }
        for (i, (fam, k)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("×")?;
            }
            write!(f, "{fam:?}{k}")?;
        }
        Ok(())
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    /// Accepts `A1×A5`, `A3xA3`, `A3^2`, `A2³`, `4A1` and `empty`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("Dynkin type {s:?}"));
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(Self::default());
        }
        let norm = s.replace('²', "^2").replace('³', "^3").replace('⁴', "^4");
        let mut out = Vec::new();
        for part in norm.split(['x', '×', '*']) {
            let part = part.trim();
            let lead: String = part.chars().take_while(|c| c.is_ascii_digit()).collect();
            let rest = &part[lead.len()..];
            let mut chars = rest.chars();
            let fam = match chars.next().ok_or_else(bad)? {
                'A' => Family::A,
                'D' => Family::D,
                'E' => Family::E,
                _ => return Err(bad()),
            };
            let tail = chars.as_str();
            let (k, pow) = match tail.split_once('^') {
                Some((k, p)) => (k, p.parse::<usize>().map_err(|_| bad())?),
                None => (tail, 1),
            };
            let k: usize = k.parse().map_err(|_| bad())?;
            let mult = if lead.is_empty() { 1 } else { lead.parse::<usize>().map_err(|_| bad())? };
            if k == 0 || mult == 0 || pow == 0 {
                return Err(bad());
            }
            for _ in 0..mult * pow {
                out.push((fam, k));
            }
        }
        Ok(Self::new(out))
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Classify the Cartan graph of the simple roots in `simple`.
pub fn classify(rs: &RootSystem, simple: RootMask) -> Result<DynkinType> {
    let nodes: Vec<usize> = bits(simple).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            match rs.pairing(nodes[a], nodes[b]) {
                0 => {}
                1 => {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                _ => return Err(Error::Unclassifiable(nodes.len())),
            }
        }
    }
    let mut seen = vec![false; nodes.len()];
    let mut factors = Vec::new();
    for start in 0..nodes.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            for &b in &adj[comp[k]] {
                if !seen[b] {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        factors.push(classify_tree(&comp, &adj)?);
    }
    Ok(DynkinType::new(factors))
}

fn classify_tree(comp: &[usize], adj: &[Vec<usize>]) -> Result<(Family, usize)> {
    let k = comp.len();
    let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges + 1 != k {
        return Err(Error::Unclassifiable(k));
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
    if branch.is_empty() {
        if comp.iter().any(|&v| adj[v].len() > 2) {
            return Err(Error::Unclassifiable(k));
        }
        return Ok((Family::A, k));
    }
    if branch.len() > 1 || adj[branch[0]].len() != 3 {
        return Err(Error::Unclassifiable(k));
    }
    let centre = branch[0];
    let mut legs: Vec<usize> = adj[centre]
        .iter()
        .map(|&first| {
            let (mut prev, mut cur, mut len) = (centre, first, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&x| x != prev).collect();
                match next.as_slice() {
                    [] => return len,
                    [x] => {
                        prev = cur;
                        cur = *x;
                        len += 1;
                    }
                    _ => return usize::MAX,
                }
            }
        })
        .collect();
    legs.sort_unstable();
    match legs.as_slice() {
        [1, 1, _] => Ok((Family::D, k)),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Ok((Family::E, k)),
        _ => Err(Error::Unclassifiable(k)),
    }
}

/// A reflection-closed set of positive roots with its Dynkin type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSubsystem {
    ambient_n: usize,
    mask: RootMask,
    dynkin: DynkinType,
}

impl RootSubsystem {
    /// Wrap a mask that is already closed.
    pub fn from_closed_mask(ambient_n: usize, mask: RootMask) -> Result<Self> {
        let rs = root_system(ambient_n)?;
        debug_assert_eq!(rs.close(mask), mask);
        let dynkin = classify(rs, rs.simple_roots(mask))?;
        Ok(Self { ambient_n, mask, dynkin })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn mask(&self) -> RootMask {
        self.mask
    }

    pub fn dynkin_type(&self) -> &DynkinType {
        &self.dynkin
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn system(&self) -> &'static RootSystem {
        root_system(self.ambient_n).expect("validated at construction")
    }

    pub fn roots(&self) -> Vec<LatticeVector> {
        let rs = self.system();
        bits(self.mask).map(|i| rs.root(i).clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.system().labels(self.mask)
    }

    pub fn simple_roots(&self) -> Vec<LatticeVector> {
        let rs = self.system();
        bits(rs.simple_roots(self.mask)).map(|i| rs.root(i).clone()).collect()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_n == other.ambient_n {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.ambient_n, other.ambient_n))
        }
    }

    pub fn is_orthogonal_to(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.orthogonal_unchecked(other))
    }

    pub(crate) fn orthogonal_unchecked(&self, other: &Self) -> bool {
        let orth = self.system().orth_of(self.mask);
        other.mask & !orth == 0
    }

    pub fn is_disjoint_from(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.mask & other.mask == 0)
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.mask & !self.mask == 0)
    }

    pub fn orthogonal_complement(&self) -> RootSubsystem {
        let rs = self.system();
        let m = rs.close(rs.orth_of(self.mask));
        Self::from_closed_mask(self.ambient_n, m).expect("complement is a root system")
    }

    /// Intersection with the sublattice where the last coefficient vanishes,
    /// as a subsystem of the rank `n - 1` system. Empty means horizontal.
    pub fn restrict(&self) -> Result<RootSubsystem> {
        if self.ambient_n <= MIN_RANK {
            return Err(Error::RankOutOfRange(self.ambient_n - 1, "5..=7"));
        }
        let rs = self.system();
        let small = root_system(self.ambient_n - 1)?;
        let mut m = 0;
        for i in bits(self.mask) {
            let r = rs.root(i);
            if *r.multiplicities().last().expect("rank >= 5") == 0 {
                let t = r.truncate_last()?;
                m |= 1 << small.index_of(&t).expect("truncated root is a root");
            }
        }
        RootSubsystem::from_closed_mask(self.ambient_n - 1, small.close(m))
    }

    /// Image under the reflection in the positive root with index `i`.
    pub fn reflect_by_index(&self, i: usize) -> RootSubsystem {
        let rs = self.system();
        Self {
            ambient_n: self.ambient_n,
            mask: rs.reflect_mask(i, self.mask),
            dynkin: self.dynkin.clone(),
        }
    }

    pub fn reflect_by(&self, alpha: &LatticeVector) -> Result<RootSubsystem> {
        let i = self
            .system()
            .index_of(alpha)
            .ok_or_else(|| Error::NotARoot(alpha.to_string()))?;
        Ok(self.reflect_by_index(i))
    }

    fn key(&self) -> (usize, Vec<usize>) {
        (self.ambient_n, bits(self.mask).collect())
    }
}

impl PartialOrd for RootSubsystem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootSubsystem {
    /// Lexicographic on the sorted root lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Serialize, Deserialize)]
struct SubsystemRepr {
    ambient_n: usize,
    roots: Vec<LatticeVector>,
    #[serde(rename = "type")]
    ty: DynkinType,
}

impl Serialize for RootSubsystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubsystemRepr {
            ambient_n: self.ambient_n,
            roots: self.roots(),
            ty: self.dynkin.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSubsystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SubsystemRepr::deserialize(d)?;
        let sub = span_closure(repr.ambient_n, &repr.roots).map_err(D::Error::custom)?;
        if sub.len() != repr.roots.len() {
            return Err(D::Error::custom("root list is not closed"));
        }
        if sub.dynkin != repr.ty {
            return Err(D::Error::custom(format!(
                "stored type {} does not match computed type {}",
                repr.ty, sub.dynkin
            )));
        }
        Ok(sub)
    }
}

/// The subsystem generated by `generators`: all positive roots reachable by
/// reflections, which for these simply-laced systems are exactly the roots in
/// the integral span.
pub fn span_closure(ambient_n: usize, generators: &[LatticeVector]) -> Result<RootSubsystem> {
    let rs = root_system(ambient_n)?;
    let mut m = 0;
    for g in generators {
        if g.rank() != ambient_n {
            return Err(Error::RankMismatch(g.rank(), ambient_n));
        }
        let i = rs.index_of(g).ok_or_else(|| Error::NotARoot(g.to_string()))?;
        m |= 1 << i;
    }
    RootSubsystem::from_closed_mask(ambient_n, rs.close(m))
}

/// Parse short labels such as `45`, `123`, `7` into a subsystem closure.
pub fn closure_of_labels(ambient_n: usize, labels: &[&str]) -> Result<RootSubsystem> {
    let gens = labels
        .iter()
        .map(|l| LatticeVector::from_root_label(ambient_n, l))
        .collect::<Result<Vec<_>>>()?;
    span_closure(ambient_n, &gens)
}

/// Vertex and auxiliary subsystem kinds that can be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    D2,
    A1,
    A2,
    A2Cubed,
    A3Squared,
    A7,
    TwoA1,
    ThreeA1,
    FourA1,
    D4,
}

impl VertexKind {
    pub const ALL: [VertexKind; 10] = [
        VertexKind::D2,
        VertexKind::A1,
        VertexKind::A2,
        VertexKind::A2Cubed,
        VertexKind::A3Squared,
        VertexKind::A7,
        VertexKind::TwoA1,
        VertexKind::ThreeA1,
        VertexKind::FourA1,
        VertexKind::D4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            VertexKind::D2 => "D2",
            VertexKind::A1 => "A1",
            VertexKind::A2 => "A2",
            VertexKind::A2Cubed => "A2^3",
            VertexKind::A3Squared => "A3^2",
            VertexKind::A7 => "A7",
            VertexKind::TwoA1 => "2A1",
            VertexKind::ThreeA1 => "3A1",
            VertexKind::FourA1 => "4A1",
            VertexKind::D4 => "D4",
        }
    }

    /// Dynkin type of the subsystems of this kind.
    pub fn dynkin(self) -> DynkinType {
        let s = match self {
            VertexKind::D2 => "2A1",
            other => other.label(),
        };
        s.parse().expect("static label")
    }

    /// The boundary-divisor kinds of the complex in rank `n`.
    pub fn vertex_kinds(n: usize) -> Result<&'static [VertexKind]> {
        match n {
            5 => Ok(&[VertexKind::D2]),
            6 => Ok(&[VertexKind::A1, VertexKind::A2Cubed]),
            7 => Ok(&[VertexKind::A1, VertexKind::A2, VertexKind::A3Squared, VertexKind::A7]),
            _ => Err(Error::RankOutOfRange(n, "5..=7")),
        }
    }

    pub fn supported(self, n: usize) -> bool {
        use VertexKind::*;
        matches!(
            (n, self),
            (5, D2) | (6, A1) | (6, A2Cubed) | (7, A1) | (7, A2) | (7, A3Squared) | (7, A7)
                | (6, TwoA1) | (6, ThreeA1) | (6, FourA1) | (7, D4)
        )
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for VertexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "D2" {
            return Ok(VertexKind::D2);
        }
        let ty: DynkinType = s.parse()?;
        VertexKind::ALL
            .iter()
            .copied()
            .filter(|k| *k != VertexKind::D2)
            .find(|k| k.dynkin() == ty)
            .ok_or_else(|| Error::Parse(format!("unknown subsystem kind {s:?}")))
    }
}

/// All subsystems of the given kind, in canonical order.
pub fn enumerate_vertex_subsystems(n: usize, kind: VertexKind) -> Result<&'static [RootSubsystem]> {
    static CACHE: OnceLock<Vec<[OnceLock<Vec<RootSubsystem>>; 10]>> = OnceLock::new();
    if !kind.supported(n) {
        return Err(Error::UnsupportedType { n, ty: kind.label().to_string() });
    }
    let cache = CACHE.get_or_init(|| (0..3).map(|_| Default::default()).collect());
    let slot = &cache[n - MIN_RANK][kind as usize];
    if let Some(v) = slot.get() {
        return Ok(v);
    }
    let computed = compute_vertex_subsystems(n, kind)?;
    Ok(slot.get_or_init(|| computed))
}

fn finish(n: usize, masks: impl IntoIterator<Item = RootMask>) -> Result<Vec<RootSubsystem>> {
    let set: BTreeSet<RootMask> = masks.into_iter().collect();
    let mut out = set
        .into_iter()
        .map(|m| RootSubsystem::from_closed_mask(n, m))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Sets of `k` pairwise orthogonal positive roots.
fn orthogonal_sets(rs: &RootSystem, k: usize) -> Vec<RootMask> {
    fn go(rs: &RootSystem, start: usize, allowed: RootMask, left: usize, acc: RootMask, out: &mut Vec<RootMask>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in bits(allowed >> start << start) {
            go(rs, i + 1, allowed & rs.orth_mask(i), left - 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    go(rs, 0, rs.full_mask(), k, 0, &mut out);
    out
}

fn a2_masks(rs: &RootSystem) -> Vec<RootMask> {
    let mut out = Vec::new();
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if rs.pairing(i, j).abs() == 1 {
                out.push(rs.close(1 << i | 1 << j));
            }
        }
    }
    out
}

fn compute_vertex_subsystems(n: usize, kind: VertexKind) -> Result<Vec<RootSubsystem>> {
    let rs = root_system(n)?;
    let a3: DynkinType = "A3".parse()?;
    match kind {
        VertexKind::A1 => finish(n, (0..rs.len()).map(|i| 1u64 << i)),
        VertexKind::TwoA1 => finish(n, orthogonal_sets(rs, 2)),
        VertexKind::ThreeA1 => finish(n, orthogonal_sets(rs, 3)),
        VertexKind::FourA1 => finish(n, orthogonal_sets(rs, 4)),
        VertexKind::D2 => {
            let mut out = Vec::new();
            for m in orthogonal_sets(rs, 2) {
                let comp = rs.close(rs.orth_of(m));
                if classify(rs, rs.simple_roots(comp))? == a3 {
                    out.push(m);
                }
            }
            finish(n, out)
        }
        VertexKind::A2 => finish(n, a2_masks(rs)),
        VertexKind::A2Cubed => {
            let target = kind.dynkin();
            let mut out = Vec::new();
            for m in a2_masks(rs) {
                let full = m | rs.close(rs.orth_of(m));
                if classify(rs, rs.simple_roots(full))? == target {
                    out.push(full);
                }
            }
            finish(n, out)
        }
        VertexKind::D4 => {
            let target = kind.dynkin();
            let masks: Vec<RootMask> = (0..rs.len())
                .into_par_iter()
                .flat_map_iter(|c| {
                    let nbrs: Vec<usize> = (0..rs.len()).filter(|&j| rs.pairing(c, j).abs() == 1).collect();
                    let mut local = Vec::new();
                    for (x, &a) in nbrs.iter().enumerate() {
                        for (y, &b) in nbrs.iter().enumerate().skip(x + 1) {
                            if rs.pairing(a, b) != 0 {
                                continue;
                            }
                            for &d in &nbrs[y + 1..] {
                                if rs.pairing(a, d) == 0 && rs.pairing(b, d) == 0 {
                                    local.push(rs.close(1 << c | 1 << a | 1 << b | 1 << d));
                                }
                            }
                        }
                    }
                    local
                })
                .collect();
            let mut out = Vec::new();
            for m in BTreeSet::from_iter(masks) {
                if classify(rs, rs.simple_roots(m))? == target {
                    out.push(m);
                }
            }
            finish(n, out)
        }
        VertexKind::A3Squared => finish(n, a3_squared_masks(rs)?),
        VertexKind::A7 => {
            let target = kind.dynkin();
            let base = enumerate_vertex_subsystems(n, VertexKind::A3Squared)?;
            let masks: Vec<RootMask> = base
                .par_iter()
                .flat_map_iter(|s| {
                    let m = s.mask();
                    (0..rs.len())
                        .filter(move |&i| m & 1 << i == 0)
                        .map(move |i| rs.close(m | 1 << i))
                        .filter(|c| c.count_ones() == 28)
                        .collect::<Vec<_>>()
                })
                .collect();
            let mut out = Vec::new();
            for m in BTreeSet::from_iter(masks) {
                if classify(rs, rs.simple_roots(m))? == target {
                    out.push(m);
                }
            }
            finish(n, out)
        }
    }
}

/// Unordered pairs of orthogonal A3 subsystems.
fn a3_squared_masks(rs: &RootSystem) -> Result<Vec<RootMask>> {
    let a3: DynkinType = "A3".parse()?;
    let mut a3s = BTreeSet::new();
    for i in 0..rs.len() {
        for j in 0..rs.len() {
            if rs.pairing(i, j).abs() != 1 {
                continue;
            }
            for k in j + 1..rs.len() {
                if rs.pairing(i, k).abs() == 1 && rs.pairing(j, k) == 0 {
                    let m = rs.close(1 << i | 1 << j | 1 << k);
                    if m.count_ones() == 6 {
                        a3s.insert(m);
                    }
                }
            }
        }
    }
    let a3s: Vec<RootMask> = a3s
        .into_iter()
        .filter(|&m| classify(rs, rs.simple_roots(m)).map(|t| t == a3).unwrap_or(false))
        .collect();
    let mut out = Vec::new();
    for (x, &p) in a3s.iter().enumerate() {
        let orth = rs.orth_of(p);
        for &q in &a3s[x + 1..] {
            if q & !orth == 0 {
                out.push(p | q);
            }
        }
    }
    Ok(out)
}

/// Positive roots of `E_n` involving `e_n`; these restrict to nothing.
pub fn horizontal_roots(n: usize) -> Result<Vec<LatticeVector>> {
    let rs = root_system(n)?;
    if n <= MIN_RANK {
        return Err(Error::RankOutOfRange(n, "6..=7"));
    }
    Ok(rs
        .roots()
        .iter()
        .filter(|r| *r.multiplicities().last().expect("rank >= 5") != 0)
        .cloned()
        .collect())
}

/// The line of the rank `n - 1` surface matched with a horizontal root:
/// `alpha = line - e_n`.
pub fn horizontal_root_to_line(alpha: &LatticeVector) -> Result<LatticeVector> {
    if !alpha.is_root() || *alpha.multiplicities().last().unwrap_or(&0) != -1 {
        return Err(Error::Invalid(format!("{alpha} is not a horizontal root")));
    }
    let line = alpha.truncate_last()?;
    debug_assert!(line.is_line());
    Ok(line)
}

/// Inverse of [`horizontal_root_to_line`].
pub fn line_to_horizontal_root(line: &LatticeVector) -> Result<LatticeVector> {
    if !line.is_line() {
        return Err(Error::Invalid(format!("{line} is not a line")));
    }
    let mut c = line.coeffs().to_vec();
    c.push(-1);
    LatticeVector::from_coeffs(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(n: usize, labels: &[&str]) -> RootSubsystem {
        closure_of_labels(n, labels).unwrap()
    }

    #[test]
    fn closures_and_types() {
        let a = sub(5, &["45"]);
        assert_eq!(a.len(), 1);
        assert_eq!(a.dynkin_type().to_string(), "A1");
        let b = sub(5, &["12", "23"]);
        assert_eq!(b.len(), 3);
        assert_eq!(b.dynkin_type().to_string(), "A2");
        let c = sub(5, &["45", "123"]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.dynkin_type().to_string(), "A1×A1");
        let d = sub(5, &["12", "13", "23", "145", "245", "345"]);
        assert_eq!(d.len(), 6);
        assert_eq!(d.dynkin_type().to_string(), "A3");
    }

    #[test]
    fn a2_cubed_is_not_span_of_everything() {
        let s = sub(6, &["12", "23", "45", "56", "123", "456"]);
        assert_eq!(s.len(), 9);
        assert_eq!(s.dynkin_type().to_string(), "A2×A2×A2");
    }

    #[test]
    fn relations() {
        let a = sub(5, &["45"]);
        let b = sub(5, &["123"]);
        assert!(a.is_orthogonal_to(&b).unwrap());
        let x = sub(5, &["12"]);
        let y = sub(5, &["23"]);
        assert!(x.is_disjoint_from(&y).unwrap());
        assert!(!x.is_orthogonal_to(&y).unwrap());
        let z = sub(6, &["12"]);
        assert!(x.is_orthogonal_to(&z).is_err());
    }

    #[test]
    fn complements() {
        let c = sub(5, &["45", "123"]).orthogonal_complement();
        assert_eq!(c.dynkin_type().to_string(), "A3");
        assert_eq!(c.len(), 6);
        let c = sub(6, &["12"]).orthogonal_complement();
        assert_eq!(c.dynkin_type().to_string(), "A5");
        assert_eq!(c.len(), 15);
        let c = sub(5, &["12", "34"]).orthogonal_complement();
        assert_eq!(c.dynkin_type().to_string(), "A1×A1");
        assert_eq!(c.labels(), vec!["125", "345"]);
    }

    #[test]
    fn reflections() {
        let a = LatticeVector::from_root_label(6, "12").unwrap();
        assert_eq!(reflect(&a, &a).unwrap(), -&a);
        let k = crate::lattice::canonical_class(6).unwrap();
        assert_eq!(reflect(&k, &a).unwrap(), k);
        let e1 = LatticeVector::e(6, 1).unwrap();
        assert_eq!(reflect(&e1, &a).unwrap(), LatticeVector::e(6, 2).unwrap());
        assert!(reflect(&e1, &e1).is_err());
    }

    #[test]
    fn type_parsing() {
        for (s, t) in [
            ("A3xA3", "A3×A3"),
            ("A3^2", "A3×A3"),
            ("A2³", "A2×A2×A2"),
            ("4A1", "A1×A1×A1×A1"),
            ("A5xA1", "A1×A5"),
        ] {
            assert_eq!(s.parse::<DynkinType>().unwrap().to_string(), t);
        }
        assert!("B2".parse::<DynkinType>().is_err());
        assert_eq!("A3xA3".parse::<VertexKind>().unwrap(), VertexKind::A3Squared);
        assert_eq!("D2".parse::<VertexKind>().unwrap(), VertexKind::D2);
    }

    #[test]
    fn small_vertex_counts() {
        assert_eq!(enumerate_vertex_subsystems(5, VertexKind::D2).unwrap().len(), 10);
        assert_eq!(enumerate_vertex_subsystems(6, VertexKind::A1).unwrap().len(), 36);
        assert_eq!(enumerate_vertex_subsystems(6, VertexKind::A2Cubed).unwrap().len(), 40);
        assert_eq!(enumerate_vertex_subsystems(6, VertexKind::FourA1).unwrap().len(), 135);
        assert!(enumerate_vertex_subsystems(5, VertexKind::A7).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let s = sub(6, &["12", "23", "45", "56", "123", "456"]);
        let js = serde_json::to_string(&s).unwrap();
        let back: RootSubsystem = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
