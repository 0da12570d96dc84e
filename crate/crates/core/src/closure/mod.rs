//! Generated subalgebras: `F⟨⟨a⟩⟩`, ∘-generated subalgebras and the filtration.
//!
//! `F⟨⟨a⟩⟩` is ∘-closed and contains `J`, so it is the span of cell
//! indicators of a partition of positions. Starting from the partition by
//! (entry of `a`, on the diagonal), each round refines positions by the counts
//! `(1_X • 1_Y)(u, v)` over pairs of cells. That round is exactly one step of
//! the filtration `R^(i) = F⟨R^(i−1) • R^(i−1)⟩∘`, and its fixed point is the
//! closure.

mod partition;
mod subspace;

use serde::{Deserialize, Serialize};

pub use partition::Partition;
pub use subspace::SubspaceBasis;

use crate::error::{Error, Result};
use crate::exactcore::Matrix;
use crate::graphlab::{distance_and_diameter, Graph};

/// Default dimension cap for materializing closure bases.
pub const DEFAULT_MAX_N: usize = 16;

/// `R^(0) = F⟨I, a⟩∘` as a partition.
pub fn initial_partition(a: &Matrix) -> Partition {
    let n = a.n();
    Partition::from_keys(n, (0..n * n).map(|p| (a.entries()[p].clone(), p / n == p % n)))
}

/// Partitions of `R^(0), R^(1), …` up to and including the first stable one.
pub fn filtration_partitions(a: &Matrix) -> Vec<Partition> {
    let mut out = vec![initial_partition(a)];
    loop {
        let last = out.last().unwrap();
        let next = last.refine_step();
        if next.cell_count() == last.cell_count() {
            return out;
        }
        out.push(next);
    }
}

/// The partition whose indicator span is `F⟨⟨a⟩⟩`.
pub fn closure_partition(a: &Matrix) -> Partition {
    filtration_partitions(a).pop().expect("nonempty")
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLarge(format!("closure basis capped at n <= {cap}, got {n}")));
    }
    Ok(())
}

pub fn generated_double_algebra(a: &Matrix) -> Result<SubspaceBasis> {
    generated_double_algebra_with_cap(a, DEFAULT_MAX_N)
}

pub fn generated_double_algebra_with_cap(a: &Matrix, cap: usize) -> Result<SubspaceBasis> {
    check_cap(a.n(), cap)?;
    Ok(closure_partition(a).to_basis())
}

/// `F⟨S⟩∘`: smallest ∘-closed span containing `S` and `J`.
pub fn circ_generated(n: usize, s: &[Matrix]) -> Result<SubspaceBasis> {
    if let Some(m) = s.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch { left: n, right: m.n() });
    }
    let refs: Vec<&Matrix> = s.iter().collect();
    Ok(Partition::by_values(n, &refs).to_basis())
}

pub fn filtration(a: &Matrix) -> Result<Vec<SubspaceBasis>> {
    check_cap(a.n(), DEFAULT_MAX_N)?;
    Ok(filtration_partitions(a).iter().map(Partition::to_basis).collect())
}

/// `dim F⟨⟨a⟩⟩`; no size cap since nothing is materialized.
pub fn closure_dim(a: &Matrix) -> usize {
    closure_partition(a).cell_count()
}

/// `F⟨⟨a⟩⟩ = M_n(F)`.
pub fn is_full(a: &Matrix) -> bool {
    closure_dim(a) == a.n() * a.n()
}

/// Reference closure by direct fixed-point iteration over matrices.
///
/// Every newly adjoined generator is multiplied (both products, both
/// orders) with all generators adjoined so far, FIFO. Quadratic in the
/// dimension; meant as an oracle at small `n`.
pub fn naive_double_closure(a: &Matrix) -> SubspaceBasis {
    let n = a.n();
    let mut span = SubspaceBasis::new(n);
    let mut gens: Vec<Matrix> = Vec::new();
    for g in [Matrix::identity(n), Matrix::ones(n), a.clone()] {
        if span.insert(&g).expect("same size") {
            gens.push(g);
        }
    }
    let mut next = 0;
    while next < gens.len() {
        let g = gens[next].clone();
        for i in 0..=next {
            let h = gens[i].clone();
            let cands = [
                g.mat_mul(&h).expect("same size"),
                h.mat_mul(&g).expect("same size"),
                g.hadamard(&h).expect("same size"),
            ];
            for c in cands {
                if span.insert(&c).expect("same size") {
                    gens.push(c);
                }
            }
        }
        next += 1;
    }
    span
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub diam: usize,
    pub dim: usize,
    /// `diam + 1 <= dim`.
    pub lower_ok: bool,
    /// `dim <= n²`.
    pub upper_ok: bool,
    pub lower_tight: bool,
    pub upper_tight: bool,
}

/// Checks `diam(G) + 1 <= dim F⟨⟨A_G⟩⟩ <= n²` for a connected graph.
pub fn dimension_bounds_report(g: &Graph) -> Result<BoundsReport> {
    let diam = distance_and_diameter(g)?.diam;
    let dim = closure_dim(&g.adjacency());
    let n2 = g.n() * g.n();
    Ok(BoundsReport {
        diam,
        dim,
        lower_ok: diam + 1 <= dim,
        upper_ok: dim <= n2,
        lower_tight: diam + 1 == dim,
        upper_tight: dim == n2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpoly::strategies::{dpoly, symmetric_01};
    use crate::dpoly::{classic_dpoly, eval, Classic};
    use crate::exactcore::{Field, Rational};
    use crate::graphlab::{enumerate_graphs, random::{random_permutation, sample_rng}};
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let k2 = Graph::complete(2).adjacency();
        assert_eq!(generated_double_algebra(&k2).unwrap().dim(), 2);
        assert_eq!(generated_double_algebra(&Graph::path(3).adjacency()).unwrap().dim(), 5);
        assert_eq!(closure_dim(&Graph::petersen().adjacency()), 3);
        assert!(!is_full(&k2));
        assert!(!is_full(&Graph::petersen().adjacency()));
        let k2f = filtration(&k2).unwrap();
        assert_eq!(k2f.last().unwrap().dim(), 2);
        assert!(generated_double_algebra(&Graph::empty(17).adjacency()).is_err());
    }

    #[test]
    fn circ_generated_examples() {
        assert_eq!(circ_generated(3, &[Matrix::ones(3)]).unwrap().dim(), 1);
        let a = Graph::path(3).adjacency();
        assert_eq!(circ_generated(3, &[a.clone()]).unwrap().dim(), 2);
        let deg = a.mat_mul(&a).unwrap().hadamard(&Matrix::identity(3)).unwrap();
        assert_eq!(circ_generated(3, &[deg]).unwrap().dim(), 3);
        assert!(circ_generated(2, &[a]).is_err());
    }

    #[test]
    fn refinement_matches_naive_closure() {
        for n in 1..=5 {
            for g in enumerate_graphs(n).unwrap() {
                let a = g.adjacency();
                let fast = generated_double_algebra(&a).unwrap();
                let slow = naive_double_closure(&a);
                assert!(fast.same_span(&slow).unwrap(), "{g:?}");
            }
        }
    }

    #[test]
    fn refinement_matches_naive_on_nonsymmetric() {
        let a = Matrix::from_i64_rows(&[&[0, 1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]).unwrap();
        let fast = generated_double_algebra(&a).unwrap();
        assert!(fast.same_span(&naive_double_closure(&a)).unwrap());
        assert!(fast.is_bullet_closed().unwrap() && fast.is_circ_closed().unwrap());
    }

    #[test]
    fn bounds_on_small_graphs() {
        let c5 = dimension_bounds_report(&Graph::cycle(5)).unwrap();
        assert_eq!((c5.diam, c5.dim, c5.lower_tight), (2, 3, true));
        let pet = dimension_bounds_report(&Graph::petersen()).unwrap();
        assert_eq!((pet.diam, pet.dim, pet.lower_tight), (2, 3, true));
        let p3 = dimension_bounds_report(&Graph::path(3)).unwrap();
        assert_eq!((p3.diam, p3.dim, p3.lower_tight, p3.lower_ok), (2, 5, false, true));
        assert_eq!(dimension_bounds_report(&Graph::empty(3)), Err(Error::Disconnected));
    }

    #[test]
    fn distance_matrix_is_a_member() {
        for n in 2..=6 {
            for g in enumerate_graphs(n).unwrap().into_iter().filter(Graph::is_connected) {
                let p = closure_partition(&g.adjacency());
                assert!(p.spans(&distance_and_diameter(&g).unwrap().dist));
                assert!(p.is_transpose_closed());
            }
        }
    }

    #[test]
    fn full_dimension_six_vertex_graph() {
        let full: Vec<Graph> = enumerate_graphs(6).unwrap().into_iter().filter(|g| is_full(&g.adjacency())).collect();
        assert!(!full.is_empty());
        let f = filtration(&full[0].adjacency()).unwrap();
        assert_eq!(f.last().unwrap().dim(), 36);
        assert!(f.windows(2).all(|w| w[0].dim() < w[1].dim()));
    }

    #[test]
    fn permutation_equivariance() {
        let mut rng = sample_rng(3, 0);
        for g in enumerate_graphs(5).unwrap() {
            let perm = random_permutation(5, &mut rng);
            let a = g.adjacency();
            let pa = a.permuted(&perm);
            let moved: Vec<Matrix> = generated_double_algebra(&a).unwrap().basis().iter().map(|b| b.permuted(&perm)).collect();
            let target = generated_double_algebra(&pa).unwrap();
            assert!(target.same_span(&SubspaceBasis::spanned_by(5, &moved).unwrap()).unwrap());
        }
    }

    #[test]
    fn distance_polynomial_lands_in_closure() {
        let g = Graph::path(4);
        let a = g.adjacency();
        let cap = crate::dpoly::distance_n_bound(&a).unwrap();
        let d = eval(&classic_dpoly(Classic::Distance { n: 4, cap }).unwrap(), &a);
        assert!(generated_double_algebra(&a).unwrap().contains(&d).unwrap());
        assert_eq!(d.get(0, 3), &Rational::from_integer(3));
        assert!(d.get(0, 0).is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn closure_contains_every_evaluation(p in dpoly(4), a in (2usize..=6).prop_flat_map(symmetric_01)) {
            let part = closure_partition(&a);
            prop_assert!(part.spans(&eval(&p, &a)));
            // idempotent: closing the closure adds nothing
            let again = Partition::by_values(a.n(), &part.indicators().iter().collect::<Vec<_>>());
            prop_assert_eq!(again.refine_step().cell_count(), part.cell_count());
        }
    }
}
