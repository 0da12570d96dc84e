//! Partitions of the `n²` matrix positions.
//!
//! A ∘-closed subspace containing `J` is the span of the indicators of a
//! partition of positions, so closures are computed on partitions and only
//! turned into matrices at the end.

use std::collections::HashMap;
use std::hash::Hash;

use super::subspace::SubspaceBasis;
use crate::exactcore::{Field, Matrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    /// Cell id per position; ids are numbered by first occurrence.
    colors: Vec<u32>,
    cells: usize,
}

impl Partition {
    /// Groups positions by key, numbering cells in order of first occurrence.
    pub fn from_keys<K: Hash + Eq>(n: usize, keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let colors: Vec<u32> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len() as u32;
                *ids.entry(k).or_insert(next)
            })
            .collect();
        assert_eq!(colors.len(), n * n);
        Partition { n, colors, cells: ids.len() }
    }

    /// Positions grouped by the tuple of entries of the given matrices.
    pub fn by_values(n: usize, ms: &[&Matrix]) -> Self {
        Self::from_keys(n, (0..n * n).map(|p| ms.iter().map(|m| m.entries()[p].clone()).collect::<Vec<Rational>>()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.colors[i * self.n + j]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cells];
        for (p, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(p);
        }
        out
    }

    pub fn indicator(&self, cell: u32) -> Matrix {
        Matrix::from_vec(
            self.n,
            self.colors.iter().map(|&c| if c == cell { Rational::one() } else { Rational::zero() }).collect(),
        )
        .expect("n² entries")
    }

    pub fn indicators(&self) -> Vec<Matrix> {
        (0..self.cells as u32).map(|c| self.indicator(c)).collect()
    }

    /// The span of the cell indicators. Cells are numbered by smallest
    /// position, so the indicators are already a reduced echelon basis.
    pub fn to_basis(&self) -> SubspaceBasis {
        let mut pivots = vec![usize::MAX; self.cells];
        for (p, &c) in self.colors.iter().enumerate().rev() {
            pivots[c as usize] = p;
        }
        SubspaceBasis::from_echelon(self.n, self.indicators(), pivots)
    }

    /// True if `m` is constant on every cell, i.e. lies in the span.
    pub fn spans(&self, m: &Matrix) -> bool {
        let mut val: Vec<Option<&Rational>> = vec![None; self.cells];
        for (p, v) in m.entries().iter().enumerate() {
            let slot = &mut val[self.colors[p] as usize];
            match slot {
                None => *slot = Some(v),
                Some(w) if *w != v => return false,
                _ => {}
            }
        }
        true
    }

    /// True if every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut map: Vec<Option<u32>> = vec![None; self.cells];
        for (&a, &b) in self.colors.iter().zip(&other.colors) {
            match map[a as usize] {
                None => map[a as usize] = Some(b),
                Some(x) if x != b => return false,
                _ => {}
            }
        }
        true
    }

    /// Cells that lie on the diagonal.
    pub fn diagonal_cells(&self) -> Vec<u32> {
        let n = self.n;
        let mut on = vec![false; self.cells];
        let mut off = vec![false; self.cells];
        for (p, &c) in self.colors.iter().enumerate() {
            if p / n == p % n {
                on[c as usize] = true;
            } else {
                off[c as usize] = true;
            }
        }
        (0..self.cells as u32).filter(|&c| on[c as usize] && !off[c as usize]).collect()
    }

    /// The partition whose cells are the transposes of these cells.
    pub fn transposed(&self) -> Partition {
        let n = self.n;
        Self::from_keys(n, (0..n * n).map(|p| self.colors[(p % n) * n + p / n]))
    }

    pub fn is_transpose_closed(&self) -> bool {
        self.transposed().refines(self)
    }

    /// One round of the •-product refinement: each position is recolored by
    /// its color and the multiset `{(c(u,w), c(w,v)) : w}`.
    pub fn refine_step(&self) -> Partition {
        let n = self.n;
        let k = self.cells as u64;
        let keys = (0..n * n).map(|p| {
            let (u, v) = (p / n, p % n);
            let mut pairs: Vec<u64> = (0..n).map(|w| self.color(u, w) as u64 * k + self.color(w, v) as u64).collect();
            pairs.sort_unstable();
            (self.colors[p], pairs)
        });
        Self::from_keys(n, keys)
    }
}
