//! Small-graph enumeration and isomorphism oracles.

use std::collections::BTreeSet;

use super::graph::Graph;
use crate::error::{Error, Result};

/// Exhaustive enumeration is limited to this many vertices.
pub const MAX_ENUMERATE_N: usize = 6;
/// Exhaustive isomorphism search is limited to this many vertices.
pub const MAX_EXHAUSTIVE_ISO_N: usize = 8;

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            idx[i][j] = k;
            idx[j][i] = k;
            k += 1;
        }
    }
    idx
}

/// Edge set as a bit code in graph6 pair order.
pub fn edge_code(g: &Graph) -> u64 {
    assert!(g.n() <= 11, "edge code needs n <= 11");
    let idx = pair_index(g.n());
    g.edges().iter().fold(0u64, |acc, &(u, v)| acc | 1 << idx[u][v])
}

fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if code >> k & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Edge lists of `g` under each permutation, as pair-index masks.
struct Relabeler {
    perm_pairs: Vec<Vec<u64>>,
}

impl Relabeler {
    fn new(n: usize) -> Self {
        let idx = pair_index(n);
        let perm_pairs = permutations(n)
            .into_iter()
            .map(|p| {
                let mut img = Vec::new();
                for j in 1..n {
                    for i in 0..j {
                        img.push(1u64 << idx[p[i]][p[j]]);
                    }
                }
                img
            })
            .collect();
        Relabeler { perm_pairs }
    }

    fn apply(images: &[u64], code: u64) -> u64 {
        let mut out = 0;
        let mut c = code;
        while c != 0 {
            let k = c.trailing_zeros() as usize;
            out |= images[k];
            c &= c - 1;
        }
        out
    }
}

/// Brute-force canonical form: the minimum edge code over all relabelings.
pub fn canonical_code(g: &Graph) -> u64 {
    let code = edge_code(g);
    Relabeler::new(g.n()).perm_pairs.iter().map(|img| Relabeler::apply(img, code)).min().unwrap_or(0)
}

/// One graph per isomorphism class on `n` vertices, each in canonical
/// (minimum-code) labeling, sorted by code.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUMERATE_N {
        return Err(Error::TooLarge(format!("enumeration supports n <= {MAX_ENUMERATE_N}, got {n}")));
    }
    Ok(enumerate_with_automorphisms(n).into_iter().map(|(g, _)| g).collect())
}

/// Class representatives with their automorphism group orders.
pub fn enumerate_with_automorphisms(n: usize) -> Vec<(Graph, usize)> {
    assert!(n <= MAX_ENUMERATE_N);
    let pairs = n * n.saturating_sub(1) / 2;
    let rel = Relabeler::new(n);
    let mut out = Vec::new();
    'codes: for code in 0u64..(1 << pairs) {
        let mut aut = 0;
        for img in &rel.perm_pairs {
            let c = Relabeler::apply(img, code);
            if c < code {
                continue 'codes;
            }
            if c == code {
                aut += 1;
            }
        }
        out.push((graph_from_code(n, code), aut));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// Exhaustive search found this relabeling `perm` with `g1.permuted(perm) == g2`.
    Isomorphic(Vec<usize>),
    /// Exhaustive search found none.
    NotIsomorphic,
    /// An invariant differs.
    Refuted(String),
    /// Invariants agree and the graphs are too large to search.
    Unknown,
}

impl IsoVerdict {
    /// `Some(answer)` when the verdict is definitive.
    pub fn decided(&self) -> Option<bool> {
        match self {
            IsoVerdict::Isomorphic(_) => Some(true),
            IsoVerdict::NotIsomorphic | IsoVerdict::Refuted(_) => Some(false),
            IsoVerdict::Unknown => None,
        }
    }
}

fn refute(g1: &Graph, g2: &Graph) -> Option<String> {
    if g1.edge_count() != g2.edge_count() {
        return Some("edge count".into());
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Some("degree sequence".into());
    }
    if g1.triangle_count() != g2.triangle_count() {
        return Some("triangle count".into());
    }
    if g1.n() <= 64 {
        let (k1, k2) = (g1.k4_count(), g2.k4_count());
        if (k1 == 0) != (k2 == 0) {
            return Some("4-clique containment".into());
        }
        if k1 != k2 {
            return Some("4-clique count".into());
        }
    }
    None
}

/// Isomorphism oracle: exact for `n <= 8`, invariant-based refutation above.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<IsoVerdict> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch { left: g1.n(), right: g2.n() });
    }
    if let Some(reason) = refute(g1, g2) {
        if g1.n() > MAX_EXHAUSTIVE_ISO_N {
            return Ok(IsoVerdict::Refuted(reason));
        }
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if g1.n() > MAX_EXHAUSTIVE_ISO_N {
        return Ok(IsoVerdict::Unknown);
    }
    Ok(match find_isomorphism(g1, g2) {
        Some(p) => IsoVerdict::Isomorphic(p),
        None => IsoVerdict::NotIsomorphic,
    })
}

/// Backtracking search for `perm` with `g1.permuted(perm) == g2`.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    let n = g1.n();
    if n != g2.n() {
        return None;
    }
    let (d1, d2) = (g1.degrees(), g2.degrees());
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(u: usize, g1: &Graph, g2: &Graph, d1: &[usize], d2: &[usize], perm: &mut [usize], used: &mut [bool]) -> bool {
        if u == perm.len() {
            return true;
        }
        for v in 0..perm.len() {
            if used[v] || d1[u] != d2[v] {
                continue;
            }
            if (0..u).any(|w| g1.has_edge(u, w) != g2.has_edge(v, perm[w])) {
                continue;
            }
            perm[u] = v;
            used[v] = true;
            if rec(u + 1, g1, g2, d1, d2, perm, used) {
                return true;
            }
            used[v] = false;
        }
        false
    }
    rec(0, g1, g2, &d1, &d2, &mut perm, &mut used).then_some(perm)
}

/// Distinct canonical codes of a list of small graphs; used to count classes.
pub fn class_codes(graphs: &[Graph]) -> BTreeSet<u64> {
    graphs.iter().map(canonical_code).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        assert!(enumerate_graphs(7).is_err());
    }

    #[test]
    fn orbit_sizes_cover_labeled_graphs() {
        for n in 1..=6 {
            let fact: usize = (1..=n).product();
            let total: usize = enumerate_with_automorphisms(n).iter().map(|(_, aut)| fact / aut).sum();
            assert_eq!(total, 1 << (n * (n - 1) / 2), "n = {n}");
        }
    }

    #[test]
    fn iso_verdicts() {
        let p3 = Graph::path(3);
        let k3 = Graph::complete(3);
        assert_eq!(are_isomorphic(&k3, &p3).unwrap(), IsoVerdict::NotIsomorphic);
        let g = Graph::petersen();
        let perm = vec![3, 7, 1, 0, 9, 2, 8, 4, 6, 5];
        let h = g.permuted(&perm);
        assert_eq!(are_isomorphic(&g, &h).unwrap(), IsoVerdict::Unknown);
        let c = Graph::cycle(8);
        let q = c.permuted(&[2, 5, 7, 0, 1, 3, 4, 6]);
        match are_isomorphic(&c, &q).unwrap() {
            IsoVerdict::Isomorphic(p) => assert_eq!(c.permuted(&p), q),
            other => panic!("{other:?}"),
        }
        let v = are_isomorphic(&Graph::shrikhande(), &Graph::rook_4x4()).unwrap();
        assert_eq!(v, IsoVerdict::Refuted("4-clique containment".into()));
        assert!(are_isomorphic(&Graph::empty(2), &Graph::empty(3)).is_err());
    }
}
