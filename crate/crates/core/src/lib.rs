//! Double algebras of matrices, natural graph spectra, and the tooling to
//! compute and check them exactly.
//!
//! `M_n(F)` carries two products: the matrix product `•` with identity `I`
//! and the entry-wise product `∘` with identity `J`. A double polynomial is an
//! expression in one generator `x` built from both products, sums and scalars.
//! Evaluating one at an adjacency matrix gives a "natural" graph matrix.

pub mod error;
pub mod cli;
pub mod closure;
pub mod dpoly;
pub mod exactcore;
pub mod graphlab;
pub mod idempotent;
pub mod specpipe;

pub use error::{Error, Result};
pub use dpoly::DPoly;
pub use exactcore::{Field, Matrix, Rational, Spectrum};
