use rayon::prelude::*;

use super::universal::family_size;
use super::{BasisEntry, IdempotentBasis, PositionSet};
use crate::dpoly::{DPoly, Evaluator};
use crate::error::{Error, Result};
use crate::exactcore::Matrix;

/// Turns a weak universal basis into a strict one:
/// `c_i = b_i − Σ_{j<i} b_i ∘ c_j`.
///
/// On each member `c_i(a)` is `b_i(a)` unless an earlier entry already took
/// that value, in which case it is 0. Terms `b_i ∘ c_j` that vanish on every
/// member are left out of the polynomial. A value that is not 0/1, or that
/// meets an earlier value without being equal to it, means the input was not
/// weakly universal.
pub fn strictify(b: &[DPoly], family: &[Matrix]) -> Result<IdempotentBasis> {
    let n = family_size(family)?;
    let values: Vec<Vec<PositionSet>> = family
        .par_iter()
        .map(|a| {
            let mut ev = Evaluator::new(a);
            b.iter()
                .map(|p| PositionSet::from_matrix(&ev.eval(p)).ok_or_else(|| Error::WeakBasis("a value is not a 0/1 matrix".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    // transpose to entry-major
    let values: Vec<Vec<PositionSet>> = (0..b.len()).map(|i| values.iter().map(|v| v[i].clone()).collect()).collect();
    strictify_values(n, b.to_vec(), values, None)
}

/// [`strictify`] on values that are already known.
pub(crate) fn strictify_values(
    n: usize,
    b: Vec<DPoly>,
    values: Vec<Vec<PositionSet>>,
    pairing: Option<Vec<usize>>,
) -> Result<IdempotentBasis> {
    let members = values.first().map_or(0, Vec::len);
    // owner[m][p]: the earlier strict entry whose value covers p on member m
    let mut owner = vec![vec![u32::MAX; n * n]; members];
    let mut entries: Vec<BasisEntry> = Vec::with_capacity(b.len());
    for (i, (bi, vi)) in b.into_iter().zip(values).enumerate() {
        let mut out = Vec::with_capacity(members);
        let mut used: Vec<usize> = Vec::new();
        for (m, v) in vi.into_iter().enumerate() {
            let owners: Vec<u32> = v.iter().map(|p| owner[m][p]).collect();
            if owners.iter().all(|&o| o == u32::MAX) {
                for p in v.iter() {
                    owner[m][p] = i as u32;
                }
                out.push(v);
                continue;
            }
            let j = owners[0] as usize;
            if owners.iter().any(|&o| o as usize != j) || entries[j].values[m] != v {
                return Err(Error::WeakBasis(format!("entry {i} partially overlaps an earlier entry on member {m}")));
            }
            used.push(j);
            out.push(PositionSet::empty(n * n));
        }
        used.sort_unstable();
        used.dedup();
        let terms = used.iter().map(|&j| DPoly::circ(&bi, entries[j].dpoly.as_ref().expect("set below")));
        let ci = if used.is_empty() { bi.clone() } else { bi.sub(&DPoly::sum(terms.collect::<Vec<_>>())) };
        entries.push(BasisEntry { dpoly: Some(ci), values: out });
    }
    let basis = IdempotentBasis::new(n, members, entries, pairing)?;
    basis.check_orthogonal()?;
    Ok(basis)
}

/// A strict universal basis closed under the involution.
///
/// The weak basis `(b_i ∘ σ(b_i))_i` followed by the pairs `b_i, σ(b_i)` is
/// strictified; the pairing sends each entry of the first block to itself
/// and swaps the members of each pair. On symmetric members `σ(b)(a)` is the
/// transpose of `b(a)`, so values are transposed rather than re-evaluated.
/// Entries that vanish everywhere are dropped. The result is checked: values
/// disjoint and summing to `J`, partners transposed.
pub fn involution_close(basis: &IdempotentBasis, family: &[Matrix]) -> Result<IdempotentBasis> {
    let n = family_size(family)?;
    if let Some(m) = family.iter().position(|a| !a.is_symmetric()) {
        return Err(Error::NotSymmetric(m));
    }
    if basis.n() != n || basis.members() != family.len() {
        return Err(Error::InvalidArgument("basis was built for a different family".into()));
    }
    let b = basis.dpolys().ok_or_else(|| Error::InvalidArgument("every entry needs a defining polynomial".into()))?;
    let sigma = DPoly::involution_all(&b);
    let k = b.len();
    let transposed: Vec<Vec<PositionSet>> =
        basis.entries().iter().map(|e| e.values.iter().map(|v| v.transposed(n)).collect()).collect();

    let mut polys = Vec::with_capacity(3 * k);
    let mut values = Vec::with_capacity(3 * k);
    let mut pairing = Vec::with_capacity(3 * k);
    for i in 0..k {
        polys.push(DPoly::circ(&b[i], &sigma[i]));
        values.push(basis.entries()[i].values.iter().zip(&transposed[i]).map(|(v, t)| v.intersection(t)).collect());
        pairing.push(i);
    }
    for i in 0..k {
        let at = polys.len();
        polys.push(b[i].clone());
        values.push(basis.entries()[i].values.clone());
        polys.push(sigma[i].clone());
        values.push(transposed[i].clone());
        pairing.extend([at + 1, at]);
    }
    let strict = strictify_values(n, polys, values, Some(pairing))?.pruned();
    strict.check()?;
    Ok(strict)
}

/// Primitive ∘-idempotents of a ∘-closed subspace containing `J`.
///
/// Positions are grouped by the tuple of values the basis matrices take
/// there. The span of the group indicators always contains the subspace, and
/// equals it exactly when the subspace is ∘-closed and contains `J`, which
/// is what the dimension comparison checks. Ordered by smallest position.
pub fn primitive_circ_idempotents(s: &crate::closure::SubspaceBasis) -> Result<Vec<Matrix>> {
    let refs: Vec<&Matrix> = s.basis().iter().collect();
    let part = crate::closure::Partition::by_values(s.n(), &refs);
    if part.cell_count() != s.dim() {
        return Err(Error::NotCircClosed);
    }
    Ok(part.indicators())
}
