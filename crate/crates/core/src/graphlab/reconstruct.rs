//! Recovering a graph from its double algebra.
//!
//! The vertices are the primitive ∘-idempotents of `F⟨⟨A⟩⟩` that are
//! diagonal, and `s → t` is an arc when `s • A • t ≠ 0`. When there are `n`
//! of them, each is a single `E_vv` and the arcs are exactly the edges.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::closure::closure_partition;
use crate::exactcore::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    /// The graph on `V_a`, vertices in order of their diagonal position.
    pub graph: Graph,
    /// `vertex_map[k]` is the vertex of the input that idempotent `k` sits on.
    pub vertex_map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructFailure {
    /// `|V_a|`, the number of diagonal primitive idempotents.
    pub diagonal_idempotents: usize,
    pub n: usize,
}

impl std::fmt::Display for ReconstructFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "failed |V_a|={} (need {})", self.diagonal_idempotents, self.n)
    }
}

pub fn reconstruct(g: &Graph) -> Result<Reconstruction, ReconstructFailure> {
    let n = g.n();
    let a = g.adjacency();
    let part = closure_partition(&a);
    let diag = part.diagonal_cells();
    if diag.len() != n {
        return Err(ReconstructFailure { diagonal_idempotents: diag.len(), n });
    }
    let units: Vec<Matrix> = diag.iter().map(|&c| part.indicator(c)).collect();
    // each unit covers one diagonal position; cells are numbered by smallest position
    let vertex_map: Vec<usize> = diag.iter().map(|&c| part.cells()[c as usize][0] / (n + 1)).collect();
    let left: Vec<Matrix> = units.iter().map(|s| s.mat_mul(&a).expect("same size")).collect();
    let mut h = Graph::empty(n);
    for s in 0..n {
        for t in 0..n {
            let arc = !left[s].mat_mul(&units[t]).expect("same size").is_zero();
            let back = !left[t].mat_mul(&units[s]).expect("same size").is_zero();
            assert_eq!(arc, back, "arcs of a symmetric matrix come in pairs");
            if arc && s < t {
                h.add_edge(s, t);
            }
        }
    }
    Ok(Reconstruction { graph: h, vertex_map })
}

impl Reconstruction {
    /// Edge pairs where `graph` and `g` disagree through `vertex_map`.
    pub fn mismatches(&self, g: &Graph) -> usize {
        let n = self.graph.n();
        let f = &self.vertex_map;
        (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).filter(|&(s, t)| self.graph.has_edge(s, t) != g.has_edge(f[s], f[t])).count()
    }
}
