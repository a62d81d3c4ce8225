//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// `(d, m1..mn)` with `d^2 - sum m^2` as the form and `k = -3h + sum e`.
pub fn form(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn dot_k(a: &[i64]) -> i64 {
    let k: Vec<i64> = std::iter::once(-3).chain(std::iter::repeat_n(1, a.len() - 1)).collect();
    form(a, &k)
}

/// Every vector in the box `|d| <= 3`, `|m_i| <= 2` passing `keep`. Roots
/// and lines of rank at most 7 lie inside it.
fn scan(n: usize, keep: impl Fn(&[i64]) -> bool) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut v = vec![0i64; n + 1];
    for d in -3..=3 {
        v[0] = d;
        v[1..].iter_mut().for_each(|m| *m = -2);
        loop {
            if keep(&v) {
                out.insert(v.clone());
            }
            let mut pos = 1;
            while pos <= n && v[pos] == 2 {
                v[pos] = -2;
                pos += 1;
            }
            if pos > n {
                break;
            }
            v[pos] += 1;
        }
    }
    out
}

/// All roots, both signs.
pub fn roots(n: usize) -> BTreeSet<Vec<i64>> {
    scan(n, |v| dot_k(v) == 0 && form(v, v) == -2)
}

pub fn lines(n: usize) -> BTreeSet<Vec<i64>> {
    scan(n, |v| dot_k(v) == -1 && form(v, v) == -1)
}

/// Positive roots orthogonal to every root in `set`.
pub fn orthogonal_positive(all: &BTreeSet<Vec<i64>>, set: &[Vec<i64>]) -> usize {
    all.iter().filter(|r| set.iter().all(|s| form(r, s) == 0)).count() / 2
}
