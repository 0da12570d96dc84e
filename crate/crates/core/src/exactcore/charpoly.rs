//! Characteristic polynomials and the power-sum ↔ coefficient conversion.

use std::fmt;

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::scalar::{Field, Rational};
use crate::error::{Error, Result};

/// Eigenvalue multiset encoded as the monic characteristic polynomial.
///
/// `coeffs[0] = 1` and `coeffs[k]` is the coefficient of `t^{n-k}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

impl Spectrum {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if c.is_one() => Ok(Spectrum { n: coeffs.len() - 1, coeffs }),
            _ => Err(Error::InvalidArgument("characteristic polynomial must be monic".into())),
        }
    }

    /// Spectrum of the all-zero matrix, `t^n`.
    pub fn nilpotent(n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[0] = Rational::one();
        Spectrum { n, coeffs }
    }

    /// Evaluates the polynomial at `t`.
    pub fn eval_at(&self, t: &Rational) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| &(&acc * t) + c)
    }

    /// Multiplies two spectra (disjoint union of eigenvalue multisets).
    pub fn union(&self, other: &Spectrum) -> Spectrum {
        let mut c = vec![Rational::zero(); self.n + other.n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Spectrum { n: self.n + other.n, coeffs: c }
    }

    /// `∏ (t − r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Spectrum {
        roots.iter().fold(Spectrum::nilpotent(0), |acc, r| {
            acc.union(&Spectrum { n: 1, coeffs: vec![Rational::one(), -r] })
        })
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let deg = self.n - k;
            let (neg, mag) = if c.is_negative() { (true, c.abs()) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || deg == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{deg}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spectrum({self})")
    }
}

/// Coefficients of `det(tI − A)`, leading 1 first.
///
/// Uses Faddeev–LeVerrier when division by `1..=n` is defined and a
/// Hessenberg reduction otherwise.
pub fn char_poly_coeffs<F: Field>(a: &Matrix<F>) -> Vec<F> {
    if F::supports_division_up_to(a.n()) {
        faddeev_leverrier(a)
    } else {
        hessenberg_char_poly(a)
    }
}

pub fn char_poly(a: &Matrix<Rational>) -> Spectrum {
    let coeffs = match a.entries().iter().map(Rational::to_integer).collect::<Option<Vec<BigInt>>>() {
        // integer matrices skip the gcd work of rational arithmetic
        Some(ints) => faddeev_integer(a.n(), &ints).into_iter().map(Rational::from_bigint).collect(),
        None => char_poly_coeffs(a),
    };
    Spectrum { n: a.n(), coeffs }
}

/// Faddeev–LeVerrier over ℤ: every division by `k` is exact.
fn faddeev_integer(n: usize, a: &[BigInt]) -> Vec<BigInt> {
    let mul = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let xik = &x[i * n + k];
                if xik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let ykj = &y[k * n + j];
                    if !ykj.is_zero() {
                        out[i * n + j] += xik * ykj;
                    }
                }
            }
        }
        out
    };
    let mut coeffs = vec![BigInt::one()];
    let mut m = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for i in 0..n {
            next[i * n + i] += &coeffs[k - 1];
        }
        m = next;
        let trace: BigInt = (0..n).map(|i| (0..n).map(|j| &a[i * n + j] * &m[j * n + i]).sum::<BigInt>()).sum();
        coeffs.push(-trace / BigInt::from(k));
    }
    coeffs
}

pub fn faddeev_leverrier<F: Field>(a: &Matrix<F>) -> Vec<F> {
    let n = a.n();
    assert!(F::supports_division_up_to(n), "Faddeev-LeVerrier needs division by 1..=n");
    let mut coeffs = vec![F::one()];
    // M_k = A·M_{k-1} + c_{k-1} I, c_k = -tr(A·M_k)/k
    let mut m = Matrix::<F>::zero(n);
    for k in 1..=n {
        let mut next = a.mat_mul(&m).expect("square");
        let c_prev = &coeffs[k - 1];
        for i in 0..n {
            let v = next.get(i, i).add(c_prev);
            next.set(i, i, v);
        }
        m = next;
        let am = a.mat_mul(&m).expect("square");
        let k_inv = F::from_i64(k as i64).inv().expect("characteristic checked");
        coeffs.push(am.trace().neg().mul(&k_inv));
    }
    coeffs
}

/// Division-safe over every field: reduces to upper Hessenberg form by
/// similarity, then expands with the standard recurrence.
pub fn hessenberg_char_poly<F: Field>(a: &Matrix<F>) -> Vec<F> {
    let n = a.n();
    let mut h = a.to_rows();
    for col in 0..n.saturating_sub(2) {
        let pivot = (col + 1..n).find(|&r| !h[r][col].is_zero());
        let Some(p) = pivot else { continue };
        if p != col + 1 {
            h.swap(p, col + 1);
            for row in h.iter_mut() {
                row.swap(p, col + 1);
            }
        }
        let inv = h[col + 1][col].inv().expect("nonzero pivot");
        for r in col + 2..n {
            if h[r][col].is_zero() {
                continue;
            }
            let f = h[r][col].mul(&inv);
            for c in 0..n {
                let v = h[r][c].sub(&f.mul(&h[col + 1][c]));
                h[r][c] = v;
            }
            for row in h.iter_mut() {
                let v = row[col + 1].add(&f.mul(&row[r]));
                row[col + 1] = v;
            }
        }
    }
    // p_k = char poly of the leading k×k block, ascending coefficients
    let mut polys: Vec<Vec<F>> = vec![vec![F::one()]];
    for k in 1..=n {
        let hk = &h[k - 1][k - 1];
        let prev = &polys[k - 1];
        let mut pk = vec![F::zero(); k + 1];
        for (i, c) in prev.iter().enumerate() {
            pk[i + 1] = pk[i + 1].add(c);
            pk[i] = pk[i].sub(&hk.mul(c));
        }
        let mut prod = F::one();
        for i in (1..k).rev() {
            prod = prod.mul(&h[i][i - 1]);
            if prod.is_zero() {
                break;
            }
            let t = prod.mul(&h[i - 1][k - 1]);
            for (j, c) in polys[i - 1].iter().enumerate() {
                pk[j] = pk[j].sub(&t.mul(c));
            }
        }
        polys.push(pk);
    }
    let mut out = polys.pop().unwrap();
    out.reverse();
    out
}

/// Power sums `p_1..p_kmax` of the roots from descending coefficients.
pub fn traces_from_coeffs<F: Field>(coeffs: &[F], kmax: usize) -> Result<Vec<F>> {
    let n = coeffs.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty polynomial".into()))?;
    let mut p: Vec<F> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        // p_k = -(k a_k + Σ_{i=1}^{k-1} a_i p_{k-i}), a_k = 0 for k > n
        let mut s = if k <= n { F::from_i64(k as i64).mul(&coeffs[k]) } else { F::zero() };
        for i in 1..k.min(n + 1) {
            s = s.add(&coeffs[i].mul(&p[k - i - 1]));
        }
        p.push(s.neg());
    }
    Ok(p)
}

/// Descending coefficients from the first `n` power sums.
pub fn coeffs_from_traces<F: Field>(traces: &[F], n: usize) -> Result<Vec<F>> {
    if traces.len() != n {
        return Err(Error::InvalidArgument(format!("expected {n} traces, got {}", traces.len())));
    }
    if !F::supports_division_up_to(n) {
        return Err(Error::UnsupportedCharacteristic { characteristic: F::characteristic(), n });
    }
    let mut a = vec![F::one()];
    for k in 1..=n {
        let mut s = traces[k - 1].clone();
        for i in 1..k {
            s = s.add(&a[i].mul(&traces[k - i - 1]));
        }
        let k_inv = F::from_i64(k as i64).inv().expect("characteristic checked");
        a.push(s.neg().mul(&k_inv));
    }
    Ok(a)
}

pub fn traces_from_charpoly(s: &Spectrum) -> Vec<Rational> {
    traces_from_coeffs(&s.coeffs, s.n).expect("monic polynomial")
}

pub fn charpoly_from_traces(traces: &[Rational]) -> Spectrum {
    let coeffs = coeffs_from_traces(traces, traces.len()).expect("length and characteristic fixed");
    Spectrum { n: traces.len(), coeffs }
}
