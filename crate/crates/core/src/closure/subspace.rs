use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{Field, Matrix, Rational};

/// Subspace of `M_n(F)` held as a reduced row-echelon basis of the
/// row-major vectorizations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    n: usize,
    basis: Vec<Matrix>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn new(n: usize) -> Self {
        SubspaceBasis { n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a>(n: usize, ms: impl IntoIterator<Item = &'a Matrix>) -> Result<Self> {
        let mut s = Self::new(n);
        for m in ms {
            s.insert(m)?;
        }
        Ok(s)
    }

    /// Trusted constructor for bases already in reduced echelon form.
    pub(crate) fn from_echelon(n: usize, basis: Vec<Matrix>, pivots: Vec<usize>) -> Self {
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        SubspaceBasis { n, basis, pivots }
    }

    /// Validating constructor, used when reading a serialized basis.
    pub fn from_parts(n: usize, basis: Vec<Matrix>, pivots: Vec<usize>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("not a reduced echelon basis: {m}")));
        if basis.len() != pivots.len() || basis.iter().any(|b| b.n() != n) {
            return bad("shape");
        }
        if !pivots.windows(2).all(|w| w[0] < w[1]) {
            return bad("pivots not increasing");
        }
        for (i, b) in basis.iter().enumerate() {
            let e = b.entries();
            if e.iter().position(|v| !v.is_zero()) != Some(pivots[i]) || !e[pivots[i]].is_one() {
                return bad("pivot is not the leading 1");
            }
            for (j, &p) in pivots.iter().enumerate() {
                if j != i && !e[p].is_zero() {
                    return bad("pivot column not cleared");
                }
            }
        }
        Ok(SubspaceBasis { n, basis, pivots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `m` after elimination against the basis.
    pub fn reduce(&self, m: &Matrix) -> Result<Vec<Rational>> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: m.n() });
        }
        let mut v = m.entries().to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(b.entries()) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        Ok(self.reduce(m)?.iter().all(|v| v.is_zero()))
    }

    /// Adds `m` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, m: &Matrix) -> Result<bool> {
        let mut v = self.reduce(m)?;
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return Ok(false) };
        let inv = v[p].recip().expect("nonzero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for b in &mut self.basis {
            let f = b.entries()[p].clone();
            if f.is_zero() {
                continue;
            }
            let e: Vec<Rational> = b.entries().iter().zip(&v).map(|(x, y)| x - &(&f * y)).collect();
            *b = Matrix::from_vec(self.n, e).expect("same size");
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, Matrix::from_vec(self.n, v).expect("same size"));
        Ok(true)
    }

    /// Same subspace, tested by mutual membership.
    pub fn same_span(&self, other: &SubspaceBasis) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn closed_under(&self, op: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<bool> {
        for a in &self.basis {
            for b in &self.basis {
                if !self.contains(&op(a, b))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_bullet_closed(&self) -> Result<bool> {
        self.closed_under(|a, b| a.mat_mul(b).expect("same size"))
    }

    pub fn is_circ_closed(&self) -> Result<bool> {
        self.closed_under(|a, b| a.hadamard(b).expect("same size"))
    }

    pub fn is_transpose_closed(&self) -> Result<bool> {
        for b in &self.basis {
            if !self.contains(&b.transpose())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            basis: Vec<Matrix>,
            pivots: Vec<usize>,
        }
        let r = Raw::deserialize(d)?;
        SubspaceBasis::from_parts(r.n, r.basis, r.pivots).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn echelon_invariants() {
        let mut s = SubspaceBasis::new(2);
        assert!(s.insert(&m(&[&[0, 2], &[2, 0]])).unwrap());
        assert!(s.insert(&m(&[&[1, 1], &[1, 1]])).unwrap());
        assert!(!s.insert(&m(&[&[3, 0], &[0, 3]])).unwrap());
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        assert_eq!(s.basis()[0], Matrix::identity(2));
        assert!(s.contains(&m(&[&[5, -1], &[-1, 5]])).unwrap());
        assert!(!s.contains(&Matrix::unit(2, 0, 1)).unwrap());
        assert!(s.is_bullet_closed().unwrap() && s.is_circ_closed().unwrap() && s.is_transpose_closed().unwrap());
    }

    #[test]
    fn json_round_trip_validates() {
        let s = SubspaceBasis::spanned_by(2, &[Matrix::identity(2), Matrix::unit(2, 0, 1)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: SubspaceBasis = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let broken = text.replace("\"pivots\":[0,1]", "\"pivots\":[1,0]");
        assert!(serde_json::from_str::<SubspaceBasis>(&broken).is_err());
    }
}
