//! Dense square matrices over a [`Field`].

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Field, Rational};
use crate::error::{Error, Result};

/// Dense `n × n` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field = Rational> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn from_vec(n: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::NotSquare);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for small integer literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![F::zero(); n * n] }
    }

    /// The •-identity `I`.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    /// The ∘-identity `J`.
    pub fn ones(n: usize) -> Self {
        Matrix { n, data: vec![F::one(); n * n] }
    }

    /// Matrix unit `E_{st}`.
    pub fn unit(n: usize, s: usize, t: usize) -> Self {
        let mut m = Self::zero(n);
        m.data[s * n + t] = F::one();
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] = v;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// The •-product.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = vec![F::zero(); n * n];
        for i in 0..n {
            let orow = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                if a.is_one() {
                    for (o, b) in orow.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *o = o.add(b);
                        }
                    }
                } else {
                    for (o, b) in orow.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *o = o.add(&a.mul(b));
                        }
                    }
                }
            }
        }
        Ok(Matrix { n, data: out })
    }

    /// The ∘-product (entry-wise).
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a.mul(b)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a.add(b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a.sub(b)))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F {
        (0..self.n).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// •-power; `pow(0)` is `I`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mat_mul(self).expect("same dimension");
        }
        acc
    }

    /// ∘-power; `hadamard_pow(0)` is `J`.
    pub fn hadamard_pow(&self, k: u32) -> Self {
        let mut acc = Self::ones(self.n);
        for _ in 0..k {
            acc = acc.hadamard(self).expect("same dimension");
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// True if every entry is 0 or 1, i.e. the matrix is a ∘-idempotent.
    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|a| a.is_zero() || a.is_one())
    }

    /// Relabels with `perm`: the result has `(perm[i], perm[j])` equal to `(i, j)` here.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// `(tr A, tr A², …, tr A^kmax)`.
    pub fn trace_powers(&self, kmax: usize) -> Vec<F> {
        let mut out = Vec::with_capacity(kmax);
        if kmax == 0 {
            return out;
        }
        let mut p = self.clone();
        out.push(p.trace());
        for _ in 1..kmax {
            p = p.mat_mul(self).expect("same dimension");
            out.push(p.trace());
        }
        out
    }

    /// Maps every entry into another field.
    pub fn convert<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Matrix<G>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<G>>>()?;
        Some(Matrix { n: self.n, data })
    }
}

impl Matrix<Rational> {
    /// Distinct entries in increasing order; this is the ∘-spectrum.
    pub fn distinct_entries(&self) -> BTreeSet<Rational> {
        self.data.iter().cloned().collect()
    }

    pub fn max_entry(&self) -> Option<Rational> {
        self.data.iter().max().cloned()
    }

    /// Rows of `p/q` strings, the persisted form.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.to_rows().iter().map(|r| r.iter().map(Rational::to_fraction_string).collect()).collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<Rational>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Matrix::from_string_rows(&rows).map_err(D::Error::custom)
    }
}
