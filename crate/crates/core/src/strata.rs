//! Combinatorial strata of the blown-up E6 moduli space, modelled as flags of
//! orthogonal A1 sets with an optional A2^3 part, and Eckardt triples of
//! horizontal E7 roots.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::roots::{
    bits, enumerate_vertex_subsystems, horizontal_roots, root_system, DynkinType, RootMask,
    RootSubsystem, VertexKind,
};

/// Largest number of pairwise orthogonal roots in E6.
pub const MAX_CHAIN_SIZE: usize = 4;

/// The shape of a stratum: strictly increasing chain sizes plus a `b` flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumType {
    sizes: Vec<usize>,
    b: bool,
}

impl StratumType {
    pub fn new(sizes: Vec<usize>, b: bool) -> Result<Self> {
        let ok = sizes.windows(2).all(|w| w[0] < w[1])
            && sizes.iter().all(|&s| (1..=MAX_CHAIN_SIZE).contains(&s))
            && (b || !sizes.is_empty());
        if !ok {
            return Err(Error::MalformedLabel(format!("{sizes:?} b={b}")));
        }
        Ok(Self { sizes, b })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn has_b(&self) -> bool {
        self.b
    }

    /// Codimension in the moduli space.
    pub fn codim(&self) -> usize {
        self.sizes.len() + usize::from(self.b)
    }

    /// Counts depending on the unspecified subdivision of the cones spanned
    /// by three A1 rays and an A2^3 ray.
    pub fn is_model_dependent(&self) -> bool {
        self.b && self.sizes.last() == Some(&3)
    }

    /// Every type expressible in the flag model, codimension ascending.
    pub fn all() -> Vec<StratumType> {
        let mut out = Vec::new();
        for mask in 1u32..1 << MAX_CHAIN_SIZE {
            let sizes: Vec<usize> = (1..=MAX_CHAIN_SIZE).filter(|s| mask >> (s - 1) & 1 == 1).collect();
            out.push(StratumType { sizes: sizes.clone(), b: false });
            if sizes.last().is_some_and(|&s| s <= 3) {
                out.push(StratumType { sizes, b: true });
            }
        }
        out.push(StratumType { sizes: vec![], b: true });
        out.sort_by_key(|t| (t.codim(), t.to_string()));
        out
    }
}

impl fmt::Display for StratumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.sizes {
            if s == 1 {
                f.write_str("a")?;
            } else {
                write!(f, "a{s}")?;
            }
        }
        if self.b {
            f.write_str("b")?;
        }
        Ok(())
    }
}

impl FromStr for StratumType {
    type Err = Error;

    /// Grammar: `(a | a2 | a3 | a4)* b?`, nonempty, sizes strictly increasing.
    /// Subscripts may be written `a_2` or `a₂`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedLabel(s.to_string());
        let norm: String = s
            .trim()
            .chars()
            .filter(|&c| c != '_')
            .map(|c| match c {
                '₂' => '2',
                '₃' => '3',
                '₄' => '4',
                c => c,
            })
            .collect();
        let chars: Vec<char> = norm.chars().collect();
        let mut sizes = Vec::new();
        let mut b = false;
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                'a' if !b => {
                    let size = match chars.get(i + 1).and_then(|c| c.to_digit(10)) {
                        Some(d) => {
                            i += 1;
                            d as usize
                        }
                        None => 1,
                    };
                    if size < 2 && chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
                        return Err(bad());
                    }
                    sizes.push(size);
                }
                'b' if !b => b = true,
                _ => return Err(bad()),
            }
            i += 1;
        }
        StratumType::new(sizes, b).map_err(|_| bad())
    }
}

/// One stratum: a flag of orthogonal A1 sets in E6 and an optional A2^3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumLabel {
    flag: Vec<RootMask>,
    b_part: Option<RootMask>,
}

impl StratumLabel {
    pub fn new(flag: Vec<RootMask>, b_part: Option<RootMask>) -> Result<Self> {
        let rs = root_system(6)?;
        let bad = |why: &str| Err(Error::MalformedLabel(why.to_string()));
        if flag.is_empty() && b_part.is_none() {
            return bad("empty stratum");
        }
        for w in flag.windows(2) {
            if w[0] & !w[1] != 0 || w[0] == w[1] {
                return bad("flag is not strictly increasing");
            }
        }
        if let Some(&top) = flag.last() {
            if top.count_ones() as usize > MAX_CHAIN_SIZE {
                return bad("flag element too large");
            }
            for i in bits(top) {
                if top & !(rs.orth_mask(i) | 1 << i) != 0 {
                    return bad("flag roots are not orthogonal");
                }
            }
        }
        if let Some(b) = b_part {
            let ty = RootSubsystem::from_closed_mask(6, b)?;
            if *ty.dynkin_type() != VertexKind::A2Cubed.dynkin() || rs.close(b) != b {
                return bad("b part is not an A2^3");
            }
            if flag.last().is_some_and(|&top| top & !b != 0) {
                return bad("b part is not compatible with the flag");
            }
        }
        Ok(Self { flag, b_part })
    }

    pub fn flag(&self) -> &[RootMask] {
        &self.flag
    }

    pub fn b_part(&self) -> Option<RootMask> {
        self.b_part
    }

    pub fn stratum_type(&self) -> StratumType {
        StratumType {
            sizes: self.flag.iter().map(|m| m.count_ones() as usize).collect(),
            b: self.b_part.is_some(),
        }
    }

    pub fn type_string(&self) -> String {
        self.stratum_type().to_string()
    }

    /// Image under the reflection in the E6 root with index `i`.
    pub fn reflect_by_index(&self, i: usize) -> StratumLabel {
        let rs = root_system(6).expect("rank 6");
        StratumLabel {
            flag: self.flag.iter().map(|&m| rs.reflect_mask(i, m)).collect(),
            b_part: self.b_part.map(|m| rs.reflect_mask(i, m)),
        }
    }

    pub fn to_record(&self) -> StratumRecord {
        let rs = root_system(6).expect("rank 6");
        StratumRecord {
            type_string: self.type_string(),
            flag: self.flag.iter().map(|&m| rs.labels(m)).collect(),
            b_part: self.b_part.map(|m| rs.labels(m)),
        }
    }
}

/// Label-based serialization of a stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub type_string: String,
    pub flag: Vec<Vec<String>>,
    pub b_part: Option<Vec<String>>,
}

impl TryFrom<&StratumRecord> for StratumLabel {
    type Error = Error;

    fn try_from(r: &StratumRecord) -> Result<Self> {
        let rs = root_system(6)?;
        let mask = |labels: &[String]| -> Result<RootMask> {
            labels.iter().try_fold(0, |acc, l| {
                let v = LatticeVector::from_root_label(6, l)?;
                Ok(acc | 1 << rs.index_of(&v).expect("labelled root"))
            })
        };
        let flag = r.flag.iter().map(|s| mask(s)).collect::<Result<Vec<_>>>()?;
        let b = r.b_part.as_deref().map(mask).transpose()?;
        let s = StratumLabel::new(flag, b)?;
        if s.type_string() != r.type_string {
            return Err(Error::MalformedLabel(r.type_string.clone()));
        }
        Ok(s)
    }
}

/// Sub-masks of `m` with exactly `k` bits.
fn submasks(m: RootMask, k: usize) -> Vec<RootMask> {
    let idx: Vec<usize> = bits(m).collect();
    let mut out = Vec::new();
    fn go(idx: &[usize], start: usize, k: usize, acc: RootMask, out: &mut Vec<RootMask>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..idx.len() {
            go(idx, i + 1, k - 1, acc | 1 << idx[i], out);
        }
    }
    go(&idx, 0, k, 0, &mut out);
    out
}

fn orthogonal_sets(k: usize) -> Result<Vec<RootMask>> {
    let kind = match k {
        1 => VertexKind::A1,
        2 => VertexKind::TwoA1,
        3 => VertexKind::ThreeA1,
        4 => VertexKind::FourA1,
        _ => return Err(Error::MalformedLabel(format!("chain size {k}"))),
    };
    Ok(enumerate_vertex_subsystems(6, kind)?.iter().map(|s| s.mask()).collect())
}

/// All flags with the given increasing sizes ending in `top`.
fn flags_below(top: RootMask, sizes: &[usize]) -> Vec<Vec<RootMask>> {
    let Some((&last, rest)) = sizes.split_last() else {
        return vec![vec![]];
    };
    debug_assert_eq!(top.count_ones() as usize, last);
    let Some(&next) = rest.last() else {
        return vec![vec![top]];
    };
    let mut out = Vec::new();
    for sub in submasks(top, next) {
        for mut f in flags_below(sub, rest) {
            f.push(top);
            out.push(f);
        }
    }
    out
}

/// All strata of the given type in canonical order.
pub fn enumerate_strata(ty: &StratumType) -> Result<Vec<StratumLabel>> {
    let a2cubed = enumerate_vertex_subsystems(6, VertexKind::A2Cubed)?;
    let mut out = BTreeSet::new();
    match ty.sizes.last() {
        None => {
            for b in a2cubed {
                out.insert(StratumLabel { flag: vec![], b_part: Some(b.mask()) });
            }
        }
        Some(&top_size) => {
            for top in orthogonal_sets(top_size)? {
                let flags = flags_below(top, &ty.sizes);
                let bs: Vec<Option<RootMask>> = if ty.b {
                    a2cubed
                        .iter()
                        .filter(|b| top & !b.mask() == 0)
                        .map(|b| Some(b.mask()))
                        .collect()
                } else {
                    vec![None]
                };
                for f in &flags {
                    for &b in &bs {
                        out.insert(StratumLabel { flag: f.clone(), b_part: b });
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

pub fn count_strata(ty: &StratumType) -> Result<usize> {
    enumerate_strata(ty).map(|v| v.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub type_string: String,
    pub codim: usize,
    pub count: usize,
    pub model_dependent: bool,
    pub sample: Option<StratumRecord>,
}

/// Every flag-model type plus the open stratum.
pub fn census() -> Result<Vec<CensusRow>> {
    let mut rows = vec![CensusRow {
        type_string: "interior".into(),
        codim: 0,
        count: 1,
        model_dependent: false,
        sample: None,
    }];
    for ty in StratumType::all() {
        let strata = enumerate_strata(&ty)?;
        rows.push(CensusRow {
            type_string: ty.to_string(),
            codim: ty.codim(),
            count: strata.len(),
            model_dependent: ty.is_model_dependent(),
            sample: strata.first().map(StratumLabel::to_record),
        });
    }
    Ok(rows)
}

/// Unordered triples of pairwise orthogonal horizontal E7 roots whose
/// orthogonal complement has type D4.
pub fn enumerate_eckardt_triples() -> Result<Vec<[LatticeVector; 3]>> {
    let rs = root_system(7)?;
    let d4: DynkinType = "D4".parse()?;
    let hor: Vec<usize> = horizontal_roots(7)?
        .iter()
        .map(|r| rs.index_of(r).expect("root"))
        .collect();
    let mut out = Vec::new();
    for (x, &i) in hor.iter().enumerate() {
        for (y, &j) in hor.iter().enumerate().skip(x + 1) {
            if rs.pairing(i, j) != 0 {
                continue;
            }
            for &k in &hor[y + 1..] {
                if rs.pairing(i, k) != 0 || rs.pairing(j, k) != 0 {
                    continue;
                }
                let triple = RootSubsystem::from_closed_mask(7, 1 << i | 1 << j | 1 << k)?;
                if *triple.orthogonal_complement().dynkin_type() == d4 {
                    out.push([rs.root(i).clone(), rs.root(j).clone(), rs.root(k).clone()]);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str) -> usize {
        count_strata(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(count("a"), 36);
        assert_eq!(count("b"), 40);
        assert_eq!(count("a4"), 135);
        assert_eq!(count("a2"), 270);
        assert_eq!(count("ab"), 360);
    }

    #[test]
    fn label_grammar() {
        for s in ["a", "a2", "aa2a4", "a3b", "b", "a_2b", "a₂"] {
            let t: StratumType = s.parse().unwrap();
            assert_eq!(t.to_string(), s.replace('_', "").replace('₂', "2"));
        }
        for s in ["", "a2a", "a5", "ba", "c", "a1", "bb", "aa"] {
            assert!(s.parse::<StratumType>().is_err(), "{s}");
        }
        assert_eq!(count("a4b"), 0);
        assert_eq!(StratumType::all().len(), 23);
    }

    #[test]
    fn record_round_trip() {
        for ty in ["aa2", "a2b", "b"] {
            let strata = enumerate_strata(&ty.parse().unwrap()).unwrap();
            let s = &strata[strata.len() / 2];
            let rec = s.to_record();
            assert_eq!(StratumLabel::try_from(&rec).unwrap(), *s);
        }
    }

    #[test]
    fn eckardt_triples() {
        let t = enumerate_eckardt_triples().unwrap();
        assert_eq!(t.len(), 45);
    }
}
