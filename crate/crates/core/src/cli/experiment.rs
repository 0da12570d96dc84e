//! Seeded experiments over random and exhaustive graph families.
//!
//! Sample `k` at order `n` is drawn from `sample_rng(seed, (n << 32) | k)`,
//! so results do not depend on thread count or scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::is_full;
use crate::error::{Error, Result};
use crate::graphlab::bes::{bes_certificate, bes_certificate_any_r, bes_statistics, log_r};
use crate::graphlab::random::{gnp_half_from, random_permutation, sample_rng};
use crate::graphlab::{enumerate_graphs, Graph};
use crate::specpipe::{build_ds_dpoly, natural_spectrum};

/// Certification is checked against the closure, which is capped at this order.
pub const MAX_CERTIFY_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Mode {
    BesFrequency,
    CertifyAndConfirm,
    DsFamily,
}

/// `k/total`, unreduced.
pub fn rate(k: usize, total: usize) -> String {
    format!("{k}/{total}")
}

fn sample(seed: u64, n: usize, k: usize) -> Graph {
    gnp_half_from(n, &mut sample_rng(seed, ((n as u64) << 32) | k as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesFrequencyRow {
    pub n: usize,
    pub trials: usize,
    pub r: usize,
    pub r_log: usize,
    pub bes_pass_rate: String,
    pub top_degrees_distinct_rate: String,
    pub signatures_distinct_rate: String,
    /// Passing samples, exact.
    pub passes: usize,
}

pub fn bes_frequency(n: usize, trials: usize, seed: u64) -> Result<BesFrequencyRow> {
    if n < 2 || trials == 0 {
        return Err(Error::InvalidArgument("bes_frequency needs n >= 2 and trials >= 1".into()));
    }
    let flags: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let rep = bes_statistics(&sample(seed, n, k));
            (rep.top_degrees_distinct, rep.signatures_distinct)
        })
        .collect();
    let top = flags.iter().filter(|f| f.0).count();
    let sig = flags.iter().filter(|f| f.1).count();
    let passes = flags.iter().filter(|f| f.0 && f.1).count();
    let r_log = log_r(n);
    Ok(BesFrequencyRow {
        n,
        trials,
        r: r_log.min(n - 1),
        r_log,
        bes_pass_rate: rate(passes, trials),
        top_degrees_distinct_rate: rate(top, trials),
        signatures_distinct_rate: rate(sig, trials),
        passes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyRow {
    pub n: usize,
    pub trials: usize,
    pub bes_pass_rate: String,
    /// Certificates with the logarithmic `r`.
    pub certified_rate: String,
    /// Certificates with the smallest `r` that works.
    pub certified_any_r_rate: String,
    /// Certified samples (either kind) whose closure is full, over certified samples.
    pub full_dim_confirmed: String,
    pub certified: usize,
    pub counterexamples: usize,
    /// Samples with a full closure, certified or not.
    pub full_rate: String,
}

pub fn certify_and_confirm(n: usize, trials: usize, seed: u64) -> Result<CertifyRow> {
    if !(2..=MAX_CERTIFY_N).contains(&n) || trials == 0 {
        return Err(Error::InvalidArgument(format!("certify_and_confirm needs 2 <= n <= {MAX_CERTIFY_N} and trials >= 1")));
    }
    // (bes pass, certified with r′, certified with some r, full)
    let rows: Vec<(bool, bool, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let g = sample(seed, n, k);
            let pass = bes_statistics(&g).passes();
            let strict = pass && bes_certificate(&g).is_ok();
            let any = strict || bes_certificate_any_r(&g).is_ok();
            (pass, strict, any, is_full(&g.adjacency()))
        })
        .collect();
    let count = |f: &dyn Fn(&(bool, bool, bool, bool)) -> bool| rows.iter().filter(|r| f(r)).count();
    let certified = count(&|r| r.2);
    let confirmed = count(&|r| r.2 && r.3);
    Ok(CertifyRow {
        n,
        trials,
        bes_pass_rate: rate(count(&|r| r.0), trials),
        certified_rate: rate(count(&|r| r.1), trials),
        certified_any_r_rate: rate(certified, trials),
        full_dim_confirmed: rate(confirmed, certified),
        certified,
        counterexamples: certified - confirmed,
        full_rate: rate(count(&|r| r.3), trials),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsFamilyRow {
    pub n: usize,
    pub members: usize,
    pub full_members: usize,
    pub d_count: usize,
    pub fingerprint: String,
    /// Members with a spectrum no other member shares.
    pub distinct_spectra: usize,
    /// Non-isomorphic pairs of full members with different spectra, over all such pairs.
    pub full_pairs_separated: String,
    /// Relabeled copies whose spectrum matches the original, over all copies.
    pub relabel_invariant: String,
}

/// Runs the pipeline on `family` (pairwise non-isomorphic graphs of one order)
/// and checks separation and relabeling invariance.
pub fn ds_family(family: &[Graph], relabelings: usize, seed: u64) -> Result<DsFamilyRow> {
    let bundle = build_ds_dpoly(family)?;
    let n = bundle.n;
    let specs: Vec<_> = family.par_iter().map(|g| natural_spectrum(&bundle.p, g)).collect();
    let full: Vec<usize> = (0..family.len()).filter(|&m| bundle.basis.realized_on(m).len() == n * n).collect();
    let mut pairs = 0;
    let mut separated = 0;
    for (a, &i) in full.iter().enumerate() {
        for &j in &full[..a] {
            pairs += 1;
            separated += usize::from(specs[i] != specs[j]);
        }
    }
    let distinct_spectra = (0..specs.len()).filter(|&i| specs.iter().filter(|s| **s == specs[i]).count() == 1).count();
    let relabeled: Vec<bool> = (0..family.len() * relabelings)
        .into_par_iter()
        .map(|k| {
            let m = k / relabelings.max(1);
            let perm = random_permutation(n, &mut sample_rng(seed, k as u64));
            natural_spectrum(&bundle.p, &family[m].permuted(&perm)) == specs[m]
        })
        .collect();
    Ok(DsFamilyRow {
        n,
        members: family.len(),
        full_members: full.len(),
        d_count: bundle.d.len(),
        fingerprint: bundle.fingerprint.clone(),
        distinct_spectra,
        full_pairs_separated: rate(separated, pairs),
        relabel_invariant: rate(relabeled.iter().filter(|&&b| b).count(), relabeled.len()),
    })
}

/// [`ds_family`] on every graph of order `n`.
pub fn ds_family_exhaustive(n: usize, relabelings: usize, seed: u64) -> Result<DsFamilyRow> {
    ds_family(&enumerate_graphs(n)?, relabelings, seed)
}
