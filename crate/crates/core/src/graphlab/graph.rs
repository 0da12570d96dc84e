use std::fmt;

use crate::error::{Error, Result};
use crate::exactcore::{Field, Matrix, Rational};

/// Simple undirected graph on vertices `0..n`, adjacency stored as row bitsets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, bits: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidArgument(format!("bad edge ({u}, {v}) for n = {n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Reads a symmetric 0/1 matrix with zero diagonal.
    pub fn from_matrix(a: &Matrix) -> Result<Self> {
        let n = a.n();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j);
                let ok = if i == j { v.is_zero() } else { (v.is_zero() || v.is_one()) && v == a.get(j, i) };
                if !ok {
                    return Err(Error::InvalidArgument("not a simple graph adjacency matrix".into()));
                }
                if i < j && v.is_one() {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("n >= 3")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for i in 0..a {
            for j in a..a + b {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("valid")
    }

    /// `K_4 □ K_4`: vertices `(r, c)`, adjacent when they share a row or column.
    pub fn rook_4x4() -> Self {
        let mut g = Self::empty(16);
        for u in 0..16 {
            for v in u + 1..16 {
                if u / 4 == v / 4 || u % 4 == v % 4 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Cayley graph on `Z_4 × Z_4` with connection set `±(1,0), ±(0,1), ±(1,1)`.
    pub fn shrikhande() -> Self {
        let mut g = Self::empty(16);
        let gens = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
        for u in 0..16 {
            for &(dr, dc) in &gens {
                let v = ((u / 4 + dr) % 4) * 4 + (u % 4 + dc) % 4;
                if u < v {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| if self.has_edge(i, j) { Rational::one() } else { Rational::zero() })
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of vertices adjacent to both `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u).iter().zip(self.row(v)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn triangle_count(&self) -> usize {
        self.edges().iter().map(|&(u, v)| self.common_neighbors(u, v)).sum::<usize>() / 3
    }

    pub fn k4_count(&self) -> usize {
        let mut count = 0;
        for (a, b) in self.edges() {
            let common: Vec<usize> = (b + 1..self.n).filter(|&c| self.has_edge(a, c) && self.has_edge(b, c)).collect();
            for (i, &c) in common.iter().enumerate() {
                count += common[i + 1..].iter().filter(|&&d| self.has_edge(c, d)).count();
            }
        }
        count
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}
