//! Distances and the regularity parameters that pin down small double algebras.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::exactcore::{Matrix, Rational};

/// BFS distances from `s`; `None` for unreachable vertices.
pub fn bfs(g: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn all_distances(g: &Graph) -> Result<Vec<Vec<usize>>> {
    (0..g.n())
        .map(|s| bfs(g, s).into_iter().collect::<Option<Vec<usize>>>().ok_or(Error::Disconnected))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub dist: Matrix,
    pub diam: usize,
}

pub fn distance_and_diameter(g: &Graph) -> Result<DistanceReport> {
    let d = all_distances(g)?;
    let diam = d.iter().flatten().copied().max().unwrap_or(0);
    let dist = Matrix::from_fn(g.n(), |i, j| Rational::from_integer(d[i][j] as i64));
    Ok(DistanceReport { dist, diam })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParameters {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// `(n, k, λ, μ)` for connected, non-complete strongly regular graphs.
pub fn srg_parameters(g: &Graph) -> Option<SrgParameters> {
    let n = g.n();
    if n < 3 || !g.is_connected() || g.edge_count() == n * (n - 1) / 2 {
        return None;
    }
    let k = g.degree(0);
    if g.degrees().iter().any(|&d| d != k) {
        return None;
    }
    let (mut lambda, mut mu) = (None, None);
    for u in 0..n {
        for v in u + 1..n {
            let c = g.common_neighbors(u, v);
            let slot = if g.has_edge(u, v) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(c),
                Some(x) if x != c => return None,
                _ => {}
            }
        }
    }
    Some(SrgParameters { n, k, lambda: lambda?, mu: mu? })
}

/// Intersection array `{b_0, …, b_{d−1}; c_1, …, c_d}` of a distance-regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

/// `None` unless the graph is connected and distance-regular.
pub fn intersection_array(g: &Graph) -> Option<IntersectionArray> {
    let d = all_distances(g).ok()?;
    let n = g.n();
    let diam = d.iter().flatten().copied().max().unwrap_or(0);
    let mut b: Vec<Option<usize>> = vec![None; diam];
    let mut c: Vec<Option<usize>> = vec![None; diam + 1];
    for u in 0..n {
        for v in 0..n {
            let i = d[u][v];
            let (mut up, mut down) = (0, 0);
            for w in g.neighbors(v) {
                if d[u][w] == i + 1 {
                    up += 1;
                } else if i > 0 && d[u][w] == i - 1 {
                    down += 1;
                }
            }
            if i < diam && !check(&mut b[i], up) {
                return None;
            }
            if i > 0 && !check(&mut c[i], down) {
                return None;
            }
        }
    }
    Some(IntersectionArray {
        b: b.into_iter().collect::<Option<_>>()?,
        c: c.into_iter().skip(1).collect::<Option<_>>()?,
    })
}

fn check(slot: &mut Option<usize>, v: usize) -> bool {
    match *slot {
        None => {
            *slot = Some(v);
            true
        }
        Some(x) => x == v,
    }
}
