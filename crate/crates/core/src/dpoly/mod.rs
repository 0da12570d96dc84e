//! The free double algebra `F⟨⟨x⟩⟩`.

mod ast;
pub mod classic;
pub mod eval;
pub mod grammar;
pub mod json;

pub use ast::{DPoly, Kind};
pub use classic::{circ_spectrum, classic_dpoly, distance_n_bound, proj_poly, Classic};
pub use eval::{eval, Evaluator};
pub use grammar::{parse, print};

/// `σ_x(p)`.
pub fn involution(p: &DPoly) -> DPoly {
    p.involution()
}

/// `f ∗ g`, with `eval(f ∗ g, a) = eval(f, eval(g, a))`.
pub fn compose(f: &DPoly, g: &DPoly) -> DPoly {
    f.compose(g)
}

/// A random polynomial built by `steps` operations over a growing pool that
/// starts from `x`, `I` and `J`. Later steps reuse earlier results, so the
/// output shares subterms. Scalars are small integers.
pub fn random_dpoly(rng: &mut impl rand::Rng, steps: usize) -> DPoly {
    let mut pool = vec![DPoly::x(), DPoly::bullet_one(), DPoly::circ_one()];
    for _ in 0..steps {
        let a = pool[rng.random_range(0..pool.len())].clone();
        let b = pool[rng.random_range(0..pool.len())].clone();
        let next = match rng.random_range(0..4) {
            0 => a.add(&DPoly::scale(crate::exactcore::Rational::from_integer(rng.random_range(-3..=3)), &b)),
            1 => DPoly::bullet(&a, &b),
            2 => DPoly::circ(&a, &b),
            _ => a.sub(&b),
        };
        pool.push(next);
    }
    pool.pop().expect("pool starts non-empty")
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use crate::exactcore::{Field, Matrix, Rational};
    use proptest::prelude::*;

    /// Random double polynomials with shared subterms.
    pub fn dpoly(depth: u32) -> impl Strategy<Value = DPoly> {
        let leaf = prop_oneof![Just(DPoly::x()), Just(DPoly::bullet_one()), Just(DPoly::circ_one())];
        leaf.prop_recursive(depth, 24, 3, |inner| {
            prop_oneof![
                ((-3i64..=3), (1i64..=2), inner.clone()).prop_map(|(a, b, p)| DPoly::scale(Rational::new(a, b), &p)),
                prop::collection::vec(inner.clone(), 0..3).prop_map(DPoly::sum),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| DPoly::bullet(&a, &b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| DPoly::circ(&a, &b)),
            ]
        })
    }

    pub fn symmetric_01(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut m = Matrix::zero(n);
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        m.set(i, j, Rational::one());
                        m.set(j, i, Rational::one());
                    }
                    k += 1;
                }
            }
            m
        })
    }

    pub fn small_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-2i64..=2, n * n)
            .prop_map(move |v| Matrix::from_vec(n, v.into_iter().map(Rational::from_integer).collect()).unwrap())
    }
}
