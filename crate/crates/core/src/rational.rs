//! Exact rational helpers: weights, affine and quadratic forms in `c`,
//! intervals, and small dense linear algebra over `Q`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Parses `p/q` or an integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("expected an exact rational p/q, got {s:?}"));
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `constant + slope * c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    pub constant: Q,
    pub slope: Q,
}

impl Affine {
    pub fn new(constant: Q, slope: Q) -> Self {
        Affine { constant, slope }
    }

    pub fn ints(constant: i64, slope: i64) -> Self {
        Affine::new(qi(constant), qi(slope))
    }

    pub fn constant(x: Q) -> Self {
        Affine::new(x, Q::zero())
    }

    pub fn eval(&self, c: Q) -> Q {
        self.constant + self.slope * c
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }

    /// The unique zero, when the slope is nonzero.
    pub fn root(&self) -> Option<Q> {
        (!self.slope.is_zero()).then(|| -self.constant / self.slope)
    }

    pub fn scale(&self, k: Q) -> Self {
        Affine::new(self.constant * k, self.slope * k)
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine::new(self.constant + o.constant, self.slope + o.slope)
    }
}

impl AddAssign for Affine {
    fn add_assign(&mut self, o: Affine) {
        *self = *self + o;
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        Affine::new(self.constant - o.constant, self.slope - o.slope)
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        Affine::new(-self.constant, -self.slope)
    }
}

impl Mul for Affine {
    type Output = Quadratic;
    fn mul(self, o: Affine) -> Quadratic {
        Quadratic {
            c0: self.constant * o.constant,
            c1: self.constant * o.slope + self.slope * o.constant,
            c2: self.slope * o.slope,
        }
    }
}

impl fmt::Display for Affine {
    /// `-1+2c`, `c`, `-c`, `3`, `1-2c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slope = |f: &mut fmt::Formatter<'_>, s: Q, lead: bool| -> fmt::Result {
            let sign = if s.is_negative() { "-" } else if lead { "" } else { "+" };
            let a = s.abs();
            if a.is_one() {
                write!(f, "{sign}c")
            } else {
                write!(f, "{sign}{}c", fmt_q(&a))
            }
        };
        match (self.constant.is_zero(), self.slope.is_zero()) {
            (_, true) => write!(f, "{}", fmt_q(&self.constant)),
            (true, false) => slope(f, self.slope, true),
            (false, false) => {
                write!(f, "{}", fmt_q(&self.constant))?;
                slope(f, self.slope, false)
            }
        }
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_q(&self.constant), fmt_q(&self.slope)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Affine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        Ok(Affine::new(p(&a)?, p(&b)?))
    }
}

/// `c0 + c1 c + c2 c^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Quadratic {
    pub c0: Q,
    pub c1: Q,
    pub c2: Q,
}

impl Quadratic {
    pub fn ints(c0: i64, c1: i64, c2: i64) -> Self {
        Quadratic { c0: qi(c0), c1: qi(c1), c2: qi(c2) }
    }

    pub fn eval(&self, c: Q) -> Q {
        self.c0 + (self.c1 + self.c2 * c) * c
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    /// Real roots, split into rational ones and a flag for irrational ones.
    /// The identically-zero form has no roots by convention.
    pub fn roots(&self) -> QuadRoots {
        if self.c2.is_zero() {
            return match Affine::new(self.c0, self.c1).root() {
                Some(r) => QuadRoots::Rational(vec![r]),
                None => QuadRoots::Rational(vec![]),
            };
        }
        let disc = self.c1 * self.c1 - qi(4) * self.c2 * self.c0;
        if disc.is_negative() {
            return QuadRoots::Rational(vec![]);
        }
        match rational_sqrt(disc) {
            Some(s) => {
                let two_a = qi(2) * self.c2;
                let mut r = vec![(-self.c1 - s) / two_a, (-self.c1 + s) / two_a];
                r.sort();
                r.dedup();
                QuadRoots::Rational(r)
            }
            None => QuadRoots::Irrational,
        }
    }

    /// Whether a root lies strictly inside `(a, b)`; exact for irrational roots.
    pub fn has_root_in(&self, a: Q, b: Q) -> bool {
        if a >= b {
            return false;
        }
        if let QuadRoots::Rational(rs) = self.roots() {
            return rs.iter().any(|r| *r > a && *r < b);
        }
        let (fa, fb) = (self.eval(a), self.eval(b));
        if fa.signum() * fb.signum() < Q::zero() {
            return true;
        }
        let v = -self.c1 / (qi(2) * self.c2);
        v > a && v < b && self.eval(v).signum() * fa.signum() < Q::zero()
    }
}

impl Add for Quadratic {
    type Output = Quadratic;
    fn add(self, o: Quadratic) -> Quadratic {
        Quadratic { c0: self.c0 + o.c0, c1: self.c1 + o.c1, c2: self.c2 + o.c2 }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (k, x) in [(2, self.c2), (1, self.c1), (0, self.c0)] {
            if x.is_zero() {
                continue;
            }
            let mon = match k {
                2 => "c^2",
                1 => "c",
                _ => "",
            };
            let a = x.abs();
            let coef = if a.is_one() && k > 0 { String::new() } else { fmt_q(&a) };
            let sign = if x.is_negative() { "-" } else { "+" };
            parts.push(format!("{sign}{coef}{mon}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let s = parts.concat();
        write!(f, "{}", s.strip_prefix('+').unwrap_or(&s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadRoots {
    Rational(Vec<Q>),
    Irrational,
}

fn rational_sqrt(x: Q) -> Option<Q> {
    let (n, d) = (*x.numer(), *x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (sn * sn == n && sd * sd == d).then(|| Q::new(sn, sd))
}

/// A subinterval of the weight line with explicit endpoint closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_q")]
    pub lo: Q,
    pub lo_closed: bool,
    #[serde(with = "serde_q")]
    pub hi: Q,
    pub hi_closed: bool,
}

impl Interval {
    /// The chamber shape `(lo, hi]`.
    pub fn chamber(lo: Q, hi: Q) -> Self {
        Interval { lo, lo_closed: false, hi, hi_closed: true }
    }

    pub fn contains(&self, c: Q) -> bool {
        let above = if self.lo_closed { c >= self.lo } else { c > self.lo };
        let below = if self.hi_closed { c <= self.hi } else { c < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { "[" } else { "(" },
            fmt_q(&self.lo),
            fmt_q(&self.hi),
            if self.hi_closed { "]" } else { ")" }
        )
    }
}

/// Solves `m x = b` for a square nonsingular `m`.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.iter().zip(b).map(|(r, x)| r.iter().copied().chain([*x]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let piv = a[col][col];
        for x in a[col].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in col..=n {
                    let v = a[col][k];
                    a[r][k] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n]).collect())
}

/// (positive, negative, zero) inertia of a symmetric integer matrix.
pub fn inertia(g: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<Q>> = g.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    let mut size = n;
    while k < size {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..size).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..size).find(|&j| !a[k][j].is_zero()) {
                // Replace e_k by e_k + e_j, making the pivot 2 a_kj + a_jj.
                for c in 0..size {
                    let v = a[j][c];
                    a[k][c] += v;
                }
                for r in 0..size {
                    let v = a[r][j];
                    a[r][k] += v;
                }
            } else {
                // Null direction: move it past the active block.
                size -= 1;
                a.swap(k, size);
                for row in a.iter_mut() {
                    row.swap(k, size);
                }
                continue;
            }
        }
        let p = a[k][k];
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..size {
            let f = a[i][k] / p;
            if f.is_zero() {
                continue;
            }
            for c in k..size {
                let v = a[k][c];
                a[i][c] -= f * v;
            }
        }
        for i in k + 1..size {
            a[k][i] = Q::zero();
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/3").unwrap(), q(2, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("1").unwrap(), qi(1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert_eq!(fmt_q(&q(-1, 6)), "-1/6");
        assert_eq!(Affine::ints(-1, 2).to_string(), "-1+2c");
        assert_eq!(Affine::ints(0, -1).to_string(), "-c");
        assert_eq!(Affine::new(qi(1), q(-1, 2)).to_string(), "1-1/2c");
        assert_eq!(Quadratic::ints(-3, 6, 8).to_string(), "8c^2+6c-3");
    }

    #[test]
    fn roots() {
        assert_eq!(Quadratic::ints(1, -4, 4).roots(), QuadRoots::Rational(vec![q(1, 2)]));
        assert_eq!(Quadratic::ints(-3, 6, 8).roots(), QuadRoots::Irrational);
        let x = Quadratic::ints(-3, 6, 8);
        assert!(x.has_root_in(q(1, 3), q(1, 2)));
        assert!(!x.has_root_in(q(1, 2), qi(1)));
    }

    #[test]
    fn inertia_of_small_forms() {
        assert_eq!(inertia(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        assert_eq!(inertia(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]), (1, 2, 0));
        assert_eq!(inertia(&[vec![0, 0], vec![0, 0]]), (0, 0, 2));
        assert_eq!(inertia(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]), (1, 2, 0));
    }

    #[test]
    fn linear_solve() {
        let m = vec![vec![qi(-2), qi(1)], vec![qi(1), qi(-2)]];
        let x = solve(&m, &[qi(1), qi(1)]).unwrap();
        assert_eq!(x, vec![qi(-1), qi(-1)]);
    }
}
