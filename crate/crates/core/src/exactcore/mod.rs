//! Exact field and matrix arithmetic.

pub mod charpoly;
pub mod matrix;
pub mod scalar;

pub use charpoly::{char_poly, charpoly_from_traces, traces_from_charpoly, Spectrum};
pub use matrix::Matrix;
pub use scalar::{Field, Fp, Rational};

/// The •-product.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> crate::Result<Matrix> {
    a.mat_mul(b)
}

/// The ∘-product.
pub fn hadamard(a: &Matrix, b: &Matrix) -> crate::Result<Matrix> {
    a.hadamard(b)
}

pub fn transpose(a: &Matrix) -> Matrix {
    a.transpose()
}

pub fn trace_powers(a: &Matrix, kmax: usize) -> Vec<Rational> {
    a.trace_powers(kmax)
}
