//! Canonical forms of fiber complexes up to relabeling of components and
//! curves. Component ids, bases and curve order are forgotten; roles, curve
//! numerics, marked-line labels, incidences, gluings and special points are
//! kept.

use std::collections::BTreeMap;

use crate::surface::{CurveKind, FiberComplex};

/// Colored graph with weighted edges.
struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<(usize, i64)>>,
}

impl Graph {
    fn add(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.adj.push(vec![]);
        self.labels.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, w: i64) {
        self.adj[a].push((b, w));
        self.adj[b].push((a, w));
    }
}

fn graph_of(fiber: &FiberComplex) -> Graph {
    let mut g = Graph { labels: vec![], adj: vec![] };
    let mut curve_node: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for comp in &fiber.components {
        let k2 = comp.pair(&comp.k, &comp.k);
        let cn = g.add(format!("S|{}|{}|{}|{}", comp.role, comp.rank(), k2, comp.contracted.len()));
        for (i, c) in comp.curves.iter().enumerate() {
            let kind = match c.kind {
                CurveKind::Line => "line",
                CurveKind::Double => "double",
                CurveKind::Other => "other",
            };
            let mut labels = c.labels.clone();
            labels.sort();
            let label = format!(
                "C|{kind}|{}|{}|{}|{}",
                c.mult.unwrap_or(0),
                comp.pair(&c.class, &c.class),
                comp.pair(&c.class, &comp.k),
                labels.join(",")
            );
            let n = g.add(label);
            g.edge(cn, n, 0);
            curve_node.insert((comp.id, i), n);
        }
        for i in 0..comp.curves.len() {
            for j in i + 1..comp.curves.len() {
                let p = comp.pair(&comp.curves[i].class, &comp.curves[j].class);
                if p != 0 {
                    g.edge(curve_node[&(comp.id, i)], curve_node[&(comp.id, j)], 1 + p);
                }
            }
        }
    }
    for comp in &fiber.components {
        for (i, c) in comp.curves.iter().enumerate() {
            if let Some(p) = c.glue {
                let (a, b) = (curve_node[&(comp.id, i)], curve_node.get(&(p.component, p.curve)).copied());
                if let Some(b) = b {
                    if a < b {
                        g.edge(a, b, -1);
                    }
                }
            }
        }
    }
    for p in &fiber.special_points {
        let n = g.add(format!("P|{}", p.curves.len()));
        for &i in &p.curves {
            if let Some(&c) = curve_node.get(&(p.component, i)) {
                g.edge(n, c, 0);
            }
        }
    }
    g
}

/// Stable refinement: a node's new color is determined by its color and the
/// multiset of (neighbor color, weight). Colors are ranks of signatures, so
/// the result depends only on the isomorphism class.
fn refine(adj: &[Vec<(usize, i64)>], mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(usize, i64)>)> = (0..colors.len())
            .map(|v| {
                let mut s: Vec<(usize, i64)> = adj[v].iter().map(|&(u, w)| (colors[u], w)).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        colors = sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect();
        let n = sorted.len();
        if n == classes {
            return colors;
        }
        classes = n;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

type Certificate = Vec<(String, Vec<(usize, i64)>)>;

fn certificate(g: &Graph, colors: &[usize]) -> Certificate {
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|&v| colors[v]);
    order
        .iter()
        .map(|&v| {
            let mut s: Vec<(usize, i64)> = g.adj[v].iter().map(|&(u, w)| (colors[u], w)).collect();
            s.sort_unstable();
            (g.labels[v].clone(), s)
        })
        .collect()
}

/// Individualization-refinement: the least certificate over all choices
/// from the first nontrivial cell.
fn search(g: &Graph, colors: Vec<usize>) -> Certificate {
    let colors = refine(&g.adj, colors);
    let n = colors.len();
    if count_classes(&colors) == n {
        return certificate(g, &colors);
    }
    let mut size: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &colors {
        *size.entry(c).or_insert(0) += 1;
    }
    let target = *size.iter().find(|(_, &s)| s > 1).expect("not discrete").0;
    let mut best: Option<Certificate> = None;
    for v in (0..n).filter(|&v| colors[v] == target) {
        let ind: Vec<usize> = (0..n).map(|u| 2 * colors[u] + (colors[u] == target && u != v) as usize).collect();
        let cert = search(g, ind);
        if best.as_ref().is_none_or(|b| cert < *b) {
            best = Some(cert);
        }
    }
    best.expect("nonempty cell")
}

/// A string equal for two fibers iff they are isomorphic as labeled complexes.
pub fn canonical_form(fiber: &FiberComplex) -> String {
    let g = graph_of(fiber);
    let mut labels = g.labels.clone();
    labels.sort();
    labels.dedup();
    let colors = g.labels.iter().map(|l| labels.binary_search(l).expect("present")).collect();
    let cert = search(&g, colors);
    let mut s = String::new();
    for (label, nbrs) in cert {
        s.push_str(&label);
        for (c, w) in nbrs {
            s.push_str(&format!(";{c}:{w}"));
        }
        s.push('\n');
    }
    s
}

pub fn isomorphic(a: &FiberComplex, b: &FiberComplex) -> bool {
    a.degree == b.degree && canonical_form(a) == canonical_form(b)
}
