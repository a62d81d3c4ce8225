//! Lattice models of the component roles and a solver realizing a skeleton
//! component's incidences by curve classes.

use crate::error::{Error, Result};
use crate::lattice::enumerate_lines;
use crate::skeleton::SkeletonComponent;
use crate::surface::Role;

#[derive(Clone, Debug)]
pub struct Candidate {
    pub class: Vec<i64>,
    pub name: String,
    /// Rulings may carry several curves of the same class.
    pub reusable: bool,
}

#[derive(Clone, Debug)]
pub struct RoleModel {
    pub role: Role,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub k: Vec<i64>,
    pub candidates: Vec<Candidate>,
    pub extremal: Vec<Vec<i64>>,
}

impl RoleModel {
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            if *x != 0 {
                for (j, y) in b.iter().enumerate() {
                    s += x * self.gram[i][j] * y;
                }
            }
        }
        s
    }
}

fn plane(k: usize) -> (Vec<String>, Vec<Vec<i64>>, Vec<i64>) {
    let n = k + 1;
    let mut g = vec![vec![0; n]; n];
    g[0][0] = 1;
    for i in 1..n {
        g[i][i] = -1;
    }
    let basis = std::iter::once("h".to_string()).chain((1..n).map(|i| format!("e{i}"))).collect();
    let mut kk = vec![1; n];
    kk[0] = -3;
    (basis, g, kk)
}

/// `d h - Σ e_i` over the listed points.
fn pc(k: usize, d: i64, pts: &[usize]) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[0] = d;
    for &p in pts {
        v[p] -= 1;
    }
    v
}

fn exc(k: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[i] = 1;
    v
}

fn fixed(class: Vec<i64>, name: impl Into<String>) -> Candidate {
    Candidate { class, name: name.into(), reusable: false }
}

fn plane_model(role: Role, k: usize, curves: Vec<Candidate>) -> RoleModel {
    let (basis, gram, kk) = plane(k);
    let mut candidates = curves;
    candidates.extend((1..=k).map(|i| fixed(exc(k, i), format!("e{i}"))));
    let extremal = candidates.iter().map(|c| c.class.clone()).collect();
    RoleModel { role, basis, gram, k: kk, candidates, extremal }
}

fn bl_f0(m: usize) -> RoleModel {
    let n = 2 + m;
    let mut gram = vec![vec![0; n]; n];
    gram[0][1] = 1;
    gram[1][0] = 1;
    for i in 0..m {
        gram[2 + i][2 + i] = -1;
    }
    let v = |a: i64, b: i64, es: &[usize]| {
        let mut x = vec![0; n];
        x[0] = a;
        x[1] = b;
        for &e in es {
            x[2 + e] -= 1;
        }
        x
    };
    let mut candidates = vec![];
    if m > 0 {
        candidates.push(fixed(v(1, 1, &(0..m).collect::<Vec<_>>()), "D"));
    }
    for i in 0..m {
        let mut e = vec![0; n];
        e[2 + i] = 1;
        candidates.push(fixed(e, format!("e{}", i + 1)));
        candidates.push(fixed(v(1, 0, &[i]), format!("h1-e{}", i + 1)));
        candidates.push(fixed(v(0, 1, &[i]), format!("h2-e{}", i + 1)));
    }
    candidates.push(Candidate { class: v(1, 0, &[]), name: "h1".into(), reusable: true });
    candidates.push(Candidate { class: v(0, 1, &[]), name: "h2".into(), reusable: true });
    let extremal = candidates.iter().map(|c| c.class.clone()).collect();
    let basis = ["h1".to_string(), "h2".to_string()].into_iter().chain((1..=m).map(|i| format!("e{i}"))).collect();
    let mut k = vec![1; n];
    k[0] = -2;
    k[1] = -2;
    RoleModel { role: Role::BlF0(m as u8), basis, gram, k, candidates, extremal }
}

/// The resolved cubic `Λ_{1,6}` with the given effective (-2)-classes; lines
/// are those meeting every such class nonnegatively.
fn weak_a1(roots: &[Vec<i64>]) -> Result<RoleModel> {
    let (basis, gram, kk) = plane(6);
    let mut m = RoleModel { role: Role::WeakA1(roots.len() as u8), basis, gram, k: kk, candidates: vec![], extremal: vec![] };
    for (i, r) in roots.iter().enumerate() {
        if r.len() != 7 || m.pair(r, r) != -2 || m.pair(r, &m.k) != 0 {
            return Err(Error::Invalid(format!("{r:?} is not a root of the cubic lattice")));
        }
        m.candidates.push(fixed(r.clone(), format!("r{}", i + 1)));
    }
    for l in enumerate_lines(6)? {
        let c = l.coeffs().to_vec();
        if roots.iter().all(|r| m.pair(&c, r) >= 0) {
            m.candidates.push(fixed(c, l.to_string()));
        }
    }
    m.extremal = m.candidates.iter().map(|c| c.class.clone()).collect();
    Ok(m)
}

fn dp4() -> Result<RoleModel> {
    let (basis, gram, kk) = plane(5);
    let candidates: Vec<Candidate> =
        enumerate_lines(5)?.into_iter().map(|l| fixed(l.coeffs().to_vec(), l.to_string())).collect();
    let extremal = candidates.iter().map(|c| c.class.clone()).collect();
    Ok(RoleModel { role: Role::Dp4, basis, gram, k: kk, candidates, extremal })
}

/// The model of a role. `roots` are the effective (-2)-classes of a
/// resolved cubic and are ignored for other roles.
pub fn role_model(role: Role, roots: &[Vec<i64>]) -> Result<RoleModel> {
    let lines = |k: usize, pairs: &[(usize, usize)]| -> Vec<Candidate> {
        pairs.iter().map(|&(i, j)| fixed(pc(k, 1, &[i, j]), format!("l{i}{j}"))).collect()
    };
    Ok(match role {
        Role::WeakA1(k) => {
            if roots.len() != k as usize {
                return Err(Error::Invalid(format!("{role} needs {k} roots, got {}", roots.len())));
            }
            weak_a1(roots)?
        }
        Role::BlF0(m) if m <= 6 => bl_f0(m as usize),
        Role::Z => {
            let mut c = vec![fixed(pc(5, 1, &[1, 2]), "L1"), fixed(pc(5, 1, &[3, 4, 5]), "L2")];
            c.extend(lines(5, &[(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]));
            plane_model(role, 5, c)
        }
        Role::WeakA2 => {
            let mut c = vec![fixed(pc(6, 1, &[1, 2, 3]), "M1"), fixed(pc(6, 1, &[4, 5, 6]), "M2")];
            let pairs: Vec<(usize, usize)> = (1..=3).flat_map(|i| (4..=6).map(move |j| (i, j))).collect();
            c.extend(lines(6, &pairs));
            plane_model(role, 6, c)
        }
        Role::X => {
            let mut c = vec![fixed(pc(5, 1, &[1, 2, 5]), "L125"), fixed(pc(5, 1, &[3, 4, 5]), "L345")];
            c.extend(lines(5, &[(1, 3), (1, 4), (2, 3), (2, 4)]));
            c.push(fixed(pc(5, 1, &[5]), "h-e5"));
            plane_model(role, 5, c)
        }
        Role::M05 => {
            let pairs: Vec<(usize, usize)> = (1..=4).flat_map(|i| (i + 1..=4).map(move |j| (i, j))).collect();
            plane_model(role, 4, lines(4, &pairs))
        }
        Role::Bl1P2 => plane_model(role, 1, vec![fixed(pc(1, 1, &[1]), "h-e1")]),
        Role::P2 | Role::P2Eckardt => {
            let (basis, gram, k) = plane(0);
            let candidates = vec![Candidate { class: vec![1], name: "h".into(), reusable: true }];
            RoleModel { role, basis, gram, k, candidates, extremal: vec![vec![1]] }
        }
        Role::Dp4 => dp4()?,
        Role::SingularA1(_) | Role::BlF0(_) | Role::Bl1Cubic => {
            return Err(Error::Invalid(format!("no catalogued model for role {role}")));
        }
    })
}

/// Assigns a candidate class to every curve of a skeleton component so that
/// the pairing of any two curves is 1 when they meet and 0 otherwise.
/// `preset` fixes classes of some curves (indexed lines first). Returns the
/// first solution in candidate order.
pub fn solve_classes(model: &RoleModel, sk: &SkeletonComponent, preset: &[Option<Vec<i64>>]) -> Option<Vec<Vec<i64>>> {
    let n = sk.curve_count();
    let cands = &model.candidates;
    let pre: Vec<Option<usize>> = (0..n)
        .map(|i| preset.get(i).cloned().flatten().map(|v| cands.iter().position(|c| c.class == v)))
        .map(|o| o.map(|p| p.unwrap_or(usize::MAX)))
        .collect();
    if pre.contains(&Some(usize::MAX)) {
        return None;
    }
    let pm: Vec<Vec<i64>> = cands.iter().map(|a| cands.iter().map(|b| model.pair(&a.class, &b.class)).collect()).collect();
    // Most constrained first: preset curves, then by number of meets.
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |i: usize| (0..n).filter(|&j| j != i && sk.meet(i, j)).count();
    order.sort_by_key(|&i| (pre[i].is_none(), std::cmp::Reverse(degree(i)), i));
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; cands.len()];
    fn go(
        k: usize,
        order: &[usize],
        pre: &[Option<usize>],
        sk: &SkeletonComponent,
        cands: &[Candidate],
        pm: &[Vec<i64>],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let cur = order[k];
        let choices: Vec<usize> = match pre[cur] {
            Some(p) => vec![p],
            None => (0..cands.len()).collect(),
        };
        for ci in choices {
            if used[ci] && !cands[ci].reusable {
                continue;
            }
            let ok = order[..k].iter().all(|&o| {
                let want = sk.meet(o, cur) as i64;
                pm[assign[o].expect("assigned earlier")][ci] == want
            });
            if !ok {
                continue;
            }
            let was = used[ci];
            assign[cur] = Some(ci);
            used[ci] = true;
            if go(k + 1, order, pre, sk, cands, pm, assign, used) {
                return true;
            }
            used[ci] = was;
            assign[cur] = None;
        }
        false
    }
    if go(0, &order, &pre, sk, cands, &pm, &mut assign, &mut used) {
        Some(assign.into_iter().map(|a| cands[a.expect("complete")].class.clone()).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::inertia;

    #[test]
    fn models_have_expected_invariants() {
        let root = vec![2, -1, -1, -1, -1, -1, -1];
        let cases: Vec<(Role, Vec<Vec<i64>>)> = vec![
            (Role::WeakA1(0), vec![]),
            (Role::WeakA1(1), vec![root.clone()]),
            (Role::WeakA2, vec![]),
            (Role::BlF0(0), vec![]),
            (Role::BlF0(4), vec![]),
            (Role::X, vec![]),
            (Role::Z, vec![]),
            (Role::M05, vec![]),
            (Role::Bl1P2, vec![]),
            (Role::P2, vec![]),
            (Role::Dp4, vec![]),
        ];
        for (role, roots) in cases {
            let m = role_model(role, &roots).unwrap();
            let n = m.basis.len();
            assert_eq!(inertia(&m.gram), (1, n - 1, 0), "{role}");
            assert_eq!(m.pair(&m.k, &m.k), role.k_squared(), "{role}");
            for c in &m.candidates {
                let g = m.pair(&c.class, &c.class) + m.pair(&c.class, &m.k);
                assert_eq!(g, -2, "{role} {}", c.name);
            }
        }
        assert_eq!(role_model(Role::WeakA1(0), &[]).unwrap().candidates.len(), 27);
        assert_eq!(role_model(Role::WeakA1(1), &[root]).unwrap().candidates.len(), 1 + 21);
        assert_eq!(role_model(Role::Dp4, &[]).unwrap().candidates.len(), 16);
    }
}
