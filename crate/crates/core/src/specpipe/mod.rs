//! Natural spectra of graphs and the determining-spectrum pipeline.
//!
//! The natural spectrum of a graph `G` under a double polynomial `p` is the
//! characteristic polynomial of `p(A_G)`. For a finite family of graphs of
//! the same order, [`build_ds_dpoly`] constructs one `p` whose natural
//! spectrum separates every pair of non-isomorphic members that have full
//! double algebra.

pub mod merge;
pub mod pipeline;

pub use merge::{base_bound, demerge, edge_indicator_plan, make_merge_plan, merge, MergePlan, PlanKind};
pub use pipeline::{build_ds_dpoly, fingerprint, DsBundle};

use serde::{Deserialize, Serialize};

use crate::dpoly::{eval, DPoly, Evaluator};
use crate::error::{Error, Result};
use crate::exactcore::{char_poly, Spectrum};
use crate::graphlab::Graph;

/// `char_poly(p(A_G))`.
pub fn natural_spectrum(p: &DPoly, g: &Graph) -> Spectrum {
    char_poly(&eval(p, &g.adjacency()))
}

/// Natural spectra of `g` under each of `ps`, sharing evaluations of common subterms.
pub fn strong_spectrum_restricted(g: &Graph, ps: &[DPoly]) -> Vec<Spectrum> {
    let a = g.adjacency();
    let mut ev = Evaluator::new(&a);
    ps.iter().map(|p| char_poly(&ev.eval(p))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DsVerdict {
    EqualSpectrum,
    DifferentSpectrum,
}

/// Compares the natural spectra of two graphs of the same order under `p`.
pub fn ds_compare(g1: &Graph, g2: &Graph, p: &DPoly) -> Result<DsVerdict> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch { left: g1.n(), right: g2.n() });
    }
    Ok(if natural_spectrum(p, g1) == natural_spectrum(p, g2) { DsVerdict::EqualSpectrum } else { DsVerdict::DifferentSpectrum })
}
