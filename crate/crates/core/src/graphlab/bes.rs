//! Degree and signature statistics of a graph, and the explicit certificate
//! that they imply a full double algebra.
//!
//! Order the vertices by degree, `d_1 ≥ … ≥ d_n`, and let `w_j` be the
//! adjacency pattern of vertex `j` towards the top `r` vertices. If the top
//! `r + 1` degrees are strictly decreasing and the `w_j` for `j > r` are
//! pairwise distinct, every diagonal matrix unit is a double polynomial in
//! `A`, and so `F⟨⟨A⟩⟩ = M_n(F)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::closure::SubspaceBasis;
use crate::dpoly::{proj_poly, DPoly, Evaluator};
use crate::exactcore::{Field, Matrix, Rational};

/// `⌊3·log₂ n⌋`, exactly: the largest `r` with `2^r ≤ n³`.
pub fn log_r(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let cube = (n as u128).pow(3);
    (127 - cube.leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesReport {
    pub n: usize,
    /// `min(⌊3·log₂ n⌋, n − 1)` unless chosen explicitly.
    pub r: usize,
    /// `⌊3·log₂ n⌋` before truncation.
    pub r_log: usize,
    /// Vertices by non-increasing degree, ties by index.
    pub order: Vec<usize>,
    pub degrees_sorted: Vec<usize>,
    /// `d_1 > … > d_r > d_{r+1}`.
    pub top_degrees_distinct: bool,
    /// `w_j` for `j = r+1..n` in sorted order, as strings of `0`/`1` of length `r`.
    pub signature_rows: Vec<String>,
    pub signatures_distinct: bool,
}

impl BesReport {
    pub fn passes(&self) -> bool {
        self.top_degrees_distinct && self.signatures_distinct
    }
}

/// Statistics with `r = min(⌊3·log₂ n⌋, n − 1)`.
pub fn bes_statistics(g: &Graph) -> BesReport {
    let r = log_r(g.n()).min(g.n().saturating_sub(1));
    bes_statistics_with_r(g, r)
}

/// Statistics for an explicit `r ≤ n − 1`.
pub fn bes_statistics_with_r(g: &Graph, r: usize) -> BesReport {
    let n = g.n();
    let r_log = log_r(n);
    assert!(r < n.max(1), "r must be below n");
    let degrees = g.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| degrees[v].cmp(&degrees[u]).then(u.cmp(&v)));
    let degrees_sorted: Vec<usize> = order.iter().map(|&v| degrees[v]).collect();
    let top_degrees_distinct = (0..r).all(|i| degrees_sorted[i] > degrees_sorted[i + 1]);
    let signature_rows: Vec<String> = order[r.min(n)..]
        .iter()
        .map(|&vj| order[..r].iter().map(|&vi| if g.has_edge(vi, vj) { '1' } else { '0' }).collect())
        .collect();
    let mut seen = std::collections::HashSet::with_capacity(signature_rows.len());
    let signatures_distinct = signature_rows.iter().all(|w| seen.insert(w.as_str()));
    BesReport { n, r, r_log, order, degrees_sorted, top_degrees_distinct, signature_rows, signatures_distinct }
}

/// Why no certificate was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateFailure {
    /// `d_i = d_{i+1}` for some `i ≤ r` (1-based, sorted order).
    DegreeCollision { position: usize },
    /// `w_j = w_k` (1-based, sorted order).
    SignatureCollision { j: usize, k: usize },
    /// The constructed matrices are not the expected units.
    Verification { reason: String },
}

impl std::fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificateFailure::DegreeCollision { position } => write!(f, "degree collision at sorted position {position}"),
            CertificateFailure::SignatureCollision { j, k } => write!(f, "signatures w_{j} and w_{k} coincide"),
            CertificateFailure::Verification { reason } => write!(f, "verification failed: {reason}"),
        }
    }
}

/// The double polynomials `b_1..b_n` and what they evaluate to.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub report: BesReport,
    /// `b_k` for sorted position `k`; it evaluates to `E_vv` with `v = report.order[k]`.
    pub units: Vec<DPoly>,
    /// `dim span{b_s • J • b_t}`; `n²` on success.
    pub span_dim: usize,
}

/// Builds and checks the diagonal units of the degree/signature argument.
///
/// `b_i = proj_{{0..n−1}, d_i}((A • A) ∘ I)` for `i ≤ r`, and for `j > r`
/// `b_j = proj_{{0..r}, r}((Σ_i X_{ij} • b_i • J) ∘ (I − Σ_i b_i))` with
/// `X_{ij} = A` if `A_{ij} = 1` and `J − I − A` otherwise. Diagonal entry `k`
/// of the inner sum counts the `i ≤ r` where `w_k` and `w_j` agree. Every
/// value is evaluated and checked, so success is a certificate for this
/// graph and does not rely on the argument above.
pub fn bes_certificate(g: &Graph) -> Result<Certificate, CertificateFailure> {
    certificate_from(g, bes_statistics(g))
}

/// The smallest `r` for which the degree and signature conditions hold.
///
/// The construction above works for any `r`; the logarithmic choice only
/// matters for how likely the conditions are on a random graph.
pub fn smallest_certifying_r(g: &Graph) -> Option<usize> {
    let n = g.n();
    let degrees = g.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| degrees[v].cmp(&degrees[u]).then(u.cmp(&v)));
    for r in 0..n {
        if r > 0 && degrees[order[r - 1]] == degrees[order[r]] {
            return None;
        }
        let mut seen = std::collections::HashSet::new();
        if order[r..].iter().all(|&j| seen.insert(order[..r].iter().map(|&i| g.has_edge(i, j)).collect::<Vec<_>>())) {
            return Some(r);
        }
    }
    None
}

/// [`bes_certificate`] at [`smallest_certifying_r`].
pub fn bes_certificate_any_r(g: &Graph) -> Result<Certificate, CertificateFailure> {
    match smallest_certifying_r(g) {
        Some(r) => certificate_from(g, bes_statistics_with_r(g, r)),
        None => bes_certificate(g),
    }
}

fn certificate_from(g: &Graph, report: BesReport) -> Result<Certificate, CertificateFailure> {
    let (n, r) = (report.n, report.r);
    if let Some(i) = (0..r).find(|&i| report.degrees_sorted[i] == report.degrees_sorted[i + 1]) {
        return Err(CertificateFailure::DegreeCollision { position: i + 1 });
    }
    let mut first: HashMap<&str, usize> = HashMap::new();
    for (off, w) in report.signature_rows.iter().enumerate() {
        if let Some(&j) = first.get(w.as_str()) {
            return Err(CertificateFailure::SignatureCollision { j: r + j + 1, k: r + off + 1 });
        }
        first.insert(w, off);
    }
    let fail = |reason: String| CertificateFailure::Verification { reason };
    let q = |v: usize| Rational::from_integer(v as i64);

    let x = DPoly::x();
    let (one, jj) = (DPoly::bullet_one(), DPoly::circ_one());
    let degree_diag = DPoly::circ(&DPoly::bullet(&x, &x), &one);
    let deg_values: Vec<Rational> = (0..n).map(q).collect();
    let mut units = Vec::with_capacity(n);
    for i in 0..r {
        let proj = proj_poly(&deg_values, &q(report.degrees_sorted[i])).map_err(|e| fail(e.to_string()))?;
        units.push(proj.compose(&degree_diag));
    }
    let non_edge = jj.sub(&one).sub(&x);
    let mask = one.sub(&DPoly::sum(units.clone()));
    let count_values: Vec<Rational> = (0..=r).map(q).collect();
    let top = proj_poly(&count_values, &q(r)).map_err(|e| fail(e.to_string()))?;
    let row_sums: Vec<DPoly> = units.iter().map(|b| DPoly::bullet(b, &jj)).collect();
    for &vj in &report.order[r..] {
        let terms = (0..r).map(|i| {
            let xij = if g.has_edge(report.order[i], vj) { &x } else { &non_edge };
            DPoly::bullet(xij, &row_sums[i])
        });
        let agree = DPoly::circ(&DPoly::sum(terms.collect::<Vec<_>>()), &mask);
        units.push(top.compose(&agree));
    }

    let a = g.adjacency();
    let mut ev = Evaluator::new(&a);
    let values: Vec<Matrix> = units.iter().map(|u| (*ev.eval(u)).clone()).collect();
    for (k, v) in values.iter().enumerate() {
        let want = report.order[k];
        let ok = (0..n).all(|s| (0..n).all(|t| {
            let e = v.get(s, t);
            if s == want && t == want { e.is_one() } else { e.is_zero() }
        }));
        if !ok {
            return Err(fail(format!("b_{} is not the unit at vertex {want}", k + 1)));
        }
    }
    let jm = Matrix::ones(n);
    let mut span = SubspaceBasis::new(n);
    for s in &values {
        let left = s.mat_mul(&jm).expect("same size");
        for t in &values {
            span.insert(&left.mat_mul(t).expect("same size")).expect("same size");
        }
    }
    let span_dim = span.dim();
    if span_dim != n * n {
        return Err(fail(format!("span of b_s • J • b_t has dimension {span_dim}")));
    }
    Ok(Certificate { report, units, span_dim })
}
