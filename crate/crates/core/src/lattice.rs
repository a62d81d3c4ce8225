//! The odd unimodular lattice of signature (1, n) with basis `h, e1, ..., en`.
//!
//! Every class lives in this lattice: roots, lines, divisor classes on marked
//! del Pezzo surfaces. All arithmetic is integral.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_RANK: usize = 5;
pub const MAX_RANK: usize = 8;
/// Largest rank for which roots and lines are enumerated.
pub const MAX_ENUM_RANK: usize = 7;

/// Integer vector `d h - ...` stored as `(d; m1, ..., mn)` where the class is
/// `d h + m1 e1 + ... + mn en`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coeffs: Vec<i64>,
}

fn check_rank(n: usize) -> Result<()> {
    if (MIN_RANK..=MAX_RANK).contains(&n) {
        Ok(())
    } else {
        Err(Error::RankOutOfRange(n, "5..=8"))
    }
}

pub(crate) fn check_enum_rank(n: usize) -> Result<()> {
    if (MIN_RANK..=MAX_ENUM_RANK).contains(&n) {
        Ok(())
    } else {
        Err(Error::RankOutOfRange(n, "5..=7"))
    }
}

impl LatticeVector {
    pub fn new(d: i64, ms: &[i64]) -> Result<Self> {
        check_rank(ms.len())?;
        let mut coeffs = Vec::with_capacity(ms.len() + 1);
        coeffs.push(d);
        coeffs.extend_from_slice(ms);
        Ok(Self { coeffs })
    }

    /// Build from the full coefficient slice `[d, m1, ..., mn]`.
    pub fn from_coeffs(coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Self::new(coeffs[0], &coeffs[1..])
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(0, &vec![0; n])
    }

    pub fn h(n: usize) -> Result<Self> {
        Self::new(1, &vec![0; n])
    }

    /// The exceptional class `e_i`, 1-based.
    pub fn e(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Invalid(format!("e{i} with n = {n}")));
        }
        let mut ms = vec![0; n];
        ms[i - 1] = 1;
        Self::new(0, &ms)
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.coeffs[1..]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn pairing(&self, other: &Self) -> Result<i64> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(self.dot(other))
    }

    /// Pairing without the rank check; callers guarantee equal ranks.
    #[inline]
    pub(crate) fn dot(&self, other: &Self) -> i64 {
        let mut acc = self.coeffs[0] * other.coeffs[0];
        for (a, b) in self.coeffs[1..].iter().zip(&other.coeffs[1..]) {
            acc -= a * b;
        }
        acc
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_root(&self) -> bool {
        let k = canonical_class_unchecked(self.rank());
        self.dot(&k) == 0 && self.square() == -2
    }

    pub fn is_line(&self) -> bool {
        let k = canonical_class_unchecked(self.rank());
        self.dot(&k) == -1 && self.square() == -1
    }

    /// Drop the last exceptional coefficient, landing in rank `n - 1`.
    pub fn truncate_last(&self) -> Result<Self> {
        let n = self.rank();
        Self::from_coeffs(&self.coeffs[..n])
    }

    /// Embed into rank `n + 1` with a zero last coefficient.
    pub fn extend_zero(&self) -> Result<Self> {
        let mut c = self.coeffs.clone();
        c.push(0);
        Self::from_coeffs(&c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Short label for positive roots: `ij`, `ijk`, `i` (n = 7) or `123456` (n = 6).
    pub fn root_label(&self) -> Option<String> {
        if !self.is_root() {
            return None;
        }
        let ms = self.multiplicities();
        let idx = |pred: &dyn Fn(i64) -> bool| -> Vec<usize> {
            ms.iter()
                .enumerate()
                .filter(|(_, &m)| pred(m))
                .map(|(i, _)| i + 1)
                .collect()
        };
        let digits = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<String>();
        match self.degree() {
            0 => {
                let p = idx(&|m| m == 1);
                let q = idx(&|m| m == -1);
                (p.len() == 1 && q.len() == 1 && p[0] < q[0]).then(|| format!("{}{}", p[0], q[0]))
            }
            1 => {
                let q = idx(&|m| m == -1);
                (q.len() == 3).then(|| digits(&q))
            }
            2 => {
                let q = idx(&|m| m == -1);
                let z = idx(&|m| m == 0);
                match (self.rank(), z.len()) {
                    (6, 0) => Some(digits(&q)),
                    (7, 1) => Some(z[0].to_string()),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Parse a positive-root label. For n = 6 the label `7` is accepted as an
    /// alias of `123456`.
    pub fn from_root_label(n: usize, label: &str) -> Result<Self> {
        check_rank(n)?;
        let bad = || Error::Parse(format!("root label {label:?} for n = {n}"));
        let digits: Vec<usize> = label
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let mut ms = vec![0i64; n];
        let in_range = |i: usize| i >= 1 && i <= n;
        let v = match digits.len() {
            1 if n == 7 && in_range(digits[0]) => {
                ms.iter_mut().for_each(|m| *m = -1);
                ms[digits[0] - 1] = 0;
                Self::new(2, &ms)?
            }
            1 if n == 6 && digits[0] == 7 => Self::new(2, &[-1; 6])?,
            2 if digits.iter().all(|&i| in_range(i)) && digits[0] < digits[1] => {
                ms[digits[0] - 1] = 1;
                ms[digits[1] - 1] = -1;
                Self::new(0, &ms)?
            }
            3 if digits.iter().all(|&i| in_range(i)) && digits[0] < digits[1] && digits[1] < digits[2] => {
                for &i in &digits {
                    ms[i - 1] = -1;
                }
                Self::new(1, &ms)?
            }
            6 if n == 6 && digits == [1, 2, 3, 4, 5, 6] => Self::new(2, &[-1; 6])?,
            _ => return Err(bad()),
        };
        debug_assert!(v.is_root());
        Ok(v)
    }
}

fn canonical_class_unchecked(n: usize) -> LatticeVector {
    let mut coeffs = vec![1i64; n + 1];
    coeffs[0] = -3;
    LatticeVector { coeffs }
}

/// The canonical class `k = -3h + e1 + ... + en`.
pub fn canonical_class(n: usize) -> Result<LatticeVector> {
    check_rank(n)?;
    Ok(canonical_class_unchecked(n))
}

/// All positive roots in lexicographic order on `(d, m1, ..., mn)`.
///
/// Positive roots are `e_i - e_j` (i < j), `h - e_i - e_j - e_k`, and the
/// degree-2 roots `2h - sum_{j != i} e_j` (n = 7) or `2h - e1 - ... - e6` (n = 6).
pub fn enumerate_roots(n: usize) -> Result<Vec<LatticeVector>> {
    check_enum_rank(n)?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut ms = vec![0; n];
            ms[i] = 1;
            ms[j] = -1;
            out.push(LatticeVector::new(0, &ms)?);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut ms = vec![0; n];
                ms[i] = -1;
                ms[j] = -1;
                ms[k] = -1;
                out.push(LatticeVector::new(1, &ms)?);
            }
        }
    }
    match n {
        6 => out.push(LatticeVector::new(2, &[-1; 6])?),
        7 => {
            for i in 0..n {
                let mut ms = vec![-1; n];
                ms[i] = 0;
                out.push(LatticeVector::new(2, &ms)?);
            }
        }
        _ => {}
    }
    out.sort();
    Ok(out)
}

/// All line classes (`v^2 = v.k = -1`) in lexicographic order.
pub fn enumerate_lines(n: usize) -> Result<Vec<LatticeVector>> {
    check_enum_rank(n)?;
    // Lines for n <= 7 have 0 <= d <= 3 and -2 <= m_i <= 1.
    let mut out = Vec::new();
    let mut ms = vec![-2i64; n];
    for d in 0..=3 {
        ms.iter_mut().for_each(|m| *m = -2);
        loop {
            let v = LatticeVector::new(d, &ms)?;
            if v.is_line() {
                out.push(v);
            }
            // odometer over {-2, -1, 0, 1}^n
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                if ms[pos] < 1 {
                    ms[pos] += 1;
                    break;
                }
                ms[pos] = -2;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: Self) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in addition");
        LatticeVector {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in subtraction");
        LatticeVector {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul<&LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector {
            coeffs: rhs.coeffs.iter().map(|a| self * a).collect(),
        }
    }
}

impl fmt::Display for LatticeVector {
    /// Text form `d;m1,...,mn`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.coeffs[0])?;
        for (i, m) in self.coeffs[1..].iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for LatticeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (d, rest) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `d;m1,...,mn`, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        };
        let d = parse(d)?;
        let ms = rest.split(',').map(parse).collect::<Result<Vec<_>>>()?;
        Self::new(d, &ms)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LatticeVector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer array [d, m1, ..., mn]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(c) = seq.next_element::<i64>()? {
                    coeffs.push(c);
                }
                LatticeVector::from_coeffs(&coeffs).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> LatticeVector {
        s.parse().unwrap()
    }

    #[test]
    fn basic_pairings() {
        let h = LatticeVector::h(6).unwrap();
        let e1 = LatticeVector::e(6, 1).unwrap();
        let e2 = LatticeVector::e(6, 2).unwrap();
        assert_eq!(h.pairing(&h).unwrap(), 1);
        assert_eq!(e1.pairing(&e2).unwrap(), 0);
        assert_eq!(e1.pairing(&e1).unwrap(), -1);
        let a = v("1;-1,-1,-1,0,0,0");
        assert_eq!(a.pairing(&a).unwrap(), -2);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = LatticeVector::h(5).unwrap();
        let b = LatticeVector::h(6).unwrap();
        assert_eq!(a.pairing(&b), Err(Error::RankMismatch(5, 6)));
    }

    #[test]
    fn canonical_class_squares() {
        let k6 = canonical_class(6).unwrap();
        assert_eq!(k6, v("-3;1,1,1,1,1,1"));
        assert_eq!(k6.square(), 3);
        assert_eq!(canonical_class(5).unwrap().square(), 4);
        assert!(canonical_class(4).is_err());
        assert!(canonical_class(9).is_err());
    }

    #[test]
    fn root_and_line_predicates() {
        assert!(v("0;1,-1,0,0,0,0").is_root());
        assert!(v("1;-1,-1,-1,0,0,0").is_root());
        assert!(!v("0;1,0,0,0,0,0").is_root());
        assert!(v("0;1,0,0,0,0,0").is_line());
        assert!(v("1;-1,-1,0,0,0,0").is_line());
        assert!(!v("1;0,0,0,0,0,0").is_line());
    }

    #[test]
    fn root_and_line_counts() {
        assert_eq!(enumerate_roots(5).unwrap().len(), 20);
        assert_eq!(enumerate_roots(6).unwrap().len(), 36);
        assert_eq!(enumerate_roots(7).unwrap().len(), 63);
        assert_eq!(enumerate_lines(5).unwrap().len(), 16);
        assert_eq!(enumerate_lines(6).unwrap().len(), 27);
        assert_eq!(enumerate_lines(7).unwrap().len(), 56);
        assert!(enumerate_roots(8).is_err());
        assert!(enumerate_lines(8).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for n in 5..=7 {
            for r in enumerate_roots(n).unwrap() {
                let l = r.root_label().unwrap();
                assert_eq!(LatticeVector::from_root_label(n, &l).unwrap(), r);
            }
        }
        assert_eq!(
            LatticeVector::from_root_label(6, "7").unwrap(),
            LatticeVector::from_root_label(6, "123456").unwrap()
        );
        assert!(LatticeVector::from_root_label(5, "7").is_err());
        assert!(LatticeVector::from_root_label(6, "21").is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let a = v("2;-1,-1,-1,-1,-1,-1");
        assert_eq!(a.to_string(), "2;-1,-1,-1,-1,-1,-1");
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, "[2,-1,-1,-1,-1,-1,-1]");
        let back: LatticeVector = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
        assert!("3".parse::<LatticeVector>().is_err());
        assert!("1;1,2".parse::<LatticeVector>().is_err());
    }
}
