use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::DPoly;
use crate::error::{Error, Result};
use crate::exactcore::{Field, Matrix, Rational};

/// Lagrange-style projection `∘∏_{μ≠λ} (x − μJ)/(λ − μ)`.
///
/// Evaluated at a matrix whose entries lie in `values`, it gives the 0/1
/// indicator of the entries equal to `lambda`.
pub fn proj_poly(values: &[Rational], lambda: &Rational) -> Result<DPoly> {
    let distinct: BTreeSet<&Rational> = values.iter().collect();
    if distinct.len() != values.len() {
        return Err(Error::InvalidArgument("projection values must be distinct".into()));
    }
    if !distinct.contains(lambda) {
        return Err(Error::InvalidArgument(format!("{lambda} is not among the projection values")));
    }
    let x = DPoly::x();
    let j = DPoly::circ_one();
    let mut denom = Rational::one();
    let mut factors = Vec::new();
    for mu in distinct.into_iter().filter(|&mu| mu != lambda) {
        denom = &denom * &(lambda - mu);
        factors.push(if mu.is_zero() { x.clone() } else { x.sub(&DPoly::scale(mu.clone(), &j)) });
    }
    let prod = DPoly::circ_all(factors);
    Ok(DPoly::scale(denom.recip().expect("distinct values"), &prod))
}

/// The ∘-spectrum: distinct entries, ascending.
pub fn circ_spectrum(a: &Matrix) -> BTreeSet<Rational> {
    a.distinct_entries()
}

/// Graph matrices that are natural, with their defining double polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classic {
    Complement,
    Laplacian,
    SignlessLaplacian,
    /// Distance matrix for `n`-vertex graphs; `cap` must be at least the
    /// largest entry of `(A + I)^(n−1)`.
    Distance { n: usize, cap: u64 },
}

pub fn classic_dpoly(which: Classic) -> Result<DPoly> {
    let x = DPoly::x();
    let i = DPoly::bullet_one();
    let j = DPoly::circ_one();
    Ok(match which {
        Classic::Complement => DPoly::sum([j, i.neg(), x.neg()]),
        Classic::Laplacian => DPoly::circ(&DPoly::bullet(&x, &x), &i).sub(&x),
        Classic::SignlessLaplacian => DPoly::circ(&DPoly::bullet(&x, &x), &i).add(&x),
        Classic::Distance { n, cap } => {
            if cap < 1 {
                return Err(Error::InvalidArgument("distance polynomial needs N >= 1".into()));
            }
            let step = x.add(&i);
            let mut power = i.clone();
            let mut terms = Vec::with_capacity(n);
            for d in 0..n {
                if d > 0 {
                    power = DPoly::bullet(&power, &step);
                }
                let neg_power = power.neg();
                let factors = (1..=cap).map(|k| {
                    let lead = DPoly::scale(Rational::from_integer(k as i64), &j);
                    DPoly::sum([lead, neg_power.clone()])
                });
                terms.push(DPoly::circ_all(factors));
            }
            let factorial = (1..=cap).fold(BigInt::from(1), |acc, k| acc * k);
            DPoly::scale(Rational::from_bigint(factorial).recip().expect("positive"), &DPoly::sum(terms))
        }
    })
}

/// Largest entry of `(A + I)^(n−1)`, the smallest valid `N` for the
/// distance polynomial at `a`.
pub fn distance_n_bound(a: &Matrix) -> Result<u64> {
    let n = a.n();
    if n == 0 {
        return Ok(1);
    }
    let step = a.add(&Matrix::identity(n))?;
    let max = step.pow((n - 1) as u32).max_entry().expect("nonempty");
    max.to_integer()
        .and_then(|v| v.to_u64())
        .filter(|&v| v >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("distance bound {max} is not a positive integer")))
}
