use crate::exactcore::{Field, Matrix, Rational};

/// A set of matrix positions `i·n + j`, used for 0/1 matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSet {
    words: Vec<u64>,
}

impl PositionSet {
    pub fn empty(len: usize) -> Self {
        PositionSet { words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for p in 0..len {
            s.insert(p);
        }
        s
    }

    pub fn from_positions(len: usize, ps: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for p in ps {
            s.insert(p);
        }
        s
    }

    /// The support of a 0/1 matrix; `None` if some entry is not 0 or 1.
    pub fn from_matrix(m: &Matrix) -> Option<Self> {
        let mut s = Self::empty(m.n() * m.n());
        for (p, v) in m.entries().iter().enumerate() {
            if v.is_one() {
                s.insert(p);
            } else if !v.is_zero() {
                return None;
            }
        }
        Some(s)
    }

    pub fn to_matrix(&self, n: usize) -> Matrix {
        Matrix::from_vec(n, (0..n * n).map(|p| if self.contains(p) { Rational::one() } else { Rational::zero() }).collect())
            .expect("n² entries")
    }

    pub fn insert(&mut self, p: usize) {
        self.words[p / 64] |= 1 << (p % 64);
    }

    pub fn contains(&self, p: usize) -> bool {
        self.words.get(p / 64).is_some_and(|w| w >> (p % 64) & 1 == 1)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        PositionSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        PositionSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub fn difference(&self, other: &Self) -> Self {
        PositionSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect() }
    }

    /// The positions of the transposed matrix.
    pub fn transposed(&self, n: usize) -> Self {
        Self::from_positions(n * n, self.iter().map(|p| (p % n) * n + p / n))
    }
}
