use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::merge::{edge_indicator_plan, MergePlan};
use crate::dpoly::{parse, print, DPoly};
use crate::error::{Error, Result};
use crate::exactcore::{Matrix, Rational};
use crate::graphlab::{graph6_emit, graph6_parse, Graph};
use crate::idempotent::{involution_close, universal_basis_full, IdempotentBasis};

/// sha256 of the sorted graph6 strings, one per line.
pub fn fingerprint(family: &[Graph]) -> String {
    let mut codes: Vec<String> = family.iter().map(graph6_emit).collect();
    codes.sort();
    let mut h = Sha256::new();
    for c in &codes {
        h.update(c.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Everything the pipeline produces for one family.
#[derive(Clone, Debug)]
pub struct DsBundle {
    pub n: usize,
    pub family: Vec<Graph>,
    pub fingerprint: String,
    /// `p = Σ_i z^{i−1} d_i`.
    pub p: DPoly,
    pub d: Vec<DPoly>,
    /// Involution-closed universal basis of the family.
    pub basis: IdempotentBasis,
    pub plan: MergePlan,
}

/// Builds the single merged polynomial `p` for a family of same-size graphs.
///
/// 1. A universal basis `B` of the family's double algebras, closed under the involution.
/// 2. `C = {b • x • b′}` for pairs realized together on some member.
/// 3. `D = {c + σ(c)}`, dropping elements that vanish on every member and
///    keeping one element per distinct tuple of values over the family.
/// 4. `p = Σ z^{i−1} d_i` with an edge-indicator plan. On members with full
///    algebra every `d_i(A)` is `0`, `E_uv + E_vu`, or `2E_uu` (the last when
///    `b(A) = E_st` and `b′(A) = E_us`), and the base-`z` digits of `tr p(A)`
///    and `tr p(A)²` tell them apart.
pub fn build_ds_dpoly(family: &[Graph]) -> Result<DsBundle> {
    let n = family.first().ok_or(Error::EmptyFamily)?.n();
    if family.iter().any(|g| g.n() != n) {
        return Err(Error::MixedSizes);
    }
    let mats: Vec<Matrix> = family.iter().map(Graph::adjacency).collect();
    let run = universal_basis_full(&mats, n * n + 1)?;
    if !run.stabilized {
        return Err(Error::InvalidArgument("universal basis did not stabilize".into()));
    }
    let basis = involution_close(&run.basis, &mats)?;
    let b = basis.dpolys().expect("pipeline bases carry polynomials");
    let sigma = DPoly::involution_all(&b);

    // values of c + σ(c) for each realized pair, as integer matrices per member
    let per_member: Vec<Vec<((usize, usize), Vec<i64>)>> = family
        .par_iter()
        .enumerate()
        .map(|(m, g)| {
            let realized = basis.realized_on(m);
            let mut out = Vec::new();
            for &i in &realized {
                for &j in &realized {
                    let mut c = vec![0i64; n * n];
                    for p in basis.positions(i, m).iter() {
                        let (u, w) = (p / n, p % n);
                        for q in basis.positions(j, m).iter() {
                            let (y, v) = (q / n, q % n);
                            if g.has_edge(w, y) {
                                c[u * n + v] += 1;
                            }
                        }
                    }
                    if c.iter().any(|&x| x != 0) {
                        let d: Vec<i64> = (0..n * n).map(|p| c[p] + c[(p % n) * n + p / n]).collect();
                        out.push(((i, j), d));
                    }
                }
            }
            out
        })
        .collect();
    let mut signature: HashMap<(usize, usize), Vec<(usize, Vec<i64>)>> = HashMap::new();
    for (m, list) in per_member.into_iter().enumerate() {
        for (pair, d) in list {
            signature.entry(pair).or_default().push((m, d));
        }
    }
    let mut pairs: Vec<(usize, usize)> = signature.keys().copied().collect();
    pairs.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    let x = DPoly::x();
    let mut d = Vec::new();
    for (i, j) in pairs {
        if !seen.insert(signature[&(i, j)].clone()) {
            continue;
        }
        let c = DPoly::bullet(&DPoly::bullet(&b[i], &x), &b[j]);
        let sc = DPoly::bullet(&sigma[j], &DPoly::bullet(&x, &sigma[i]));
        d.push(c.add(&sc));
    }
    let plan = edge_indicator_plan(d.len(), n)?;
    let p = geometric_sum(&plan.z[0], &d);
    Ok(DsBundle { n, family: family.to_vec(), fingerprint: fingerprint(family), p, d, basis, plan })
}

/// `Σ_i z^i t_i`, grouped in blocks of about `√m` terms so no single
/// coefficient has more than about `√m` digits of `z` in the inner sums.
fn geometric_sum(z: &num_bigint::BigInt, terms: &[DPoly]) -> DPoly {
    let m = terms.len();
    if m == 0 {
        return DPoly::zero();
    }
    let k = (1..).find(|k| k * k >= m).expect("finite");
    let zq = Rational::from_bigint(z.clone());
    let zk = zq.pow(k as u32);
    let mut outer = Vec::new();
    let mut block_weight = Rational::from_integer(1);
    for chunk in terms.chunks(k) {
        let mut w = Rational::from_integer(1);
        let mut inner = Vec::with_capacity(chunk.len());
        for t in chunk {
            inner.push(DPoly::scale(w.clone(), t));
            w = &w * &zq;
        }
        outer.push(DPoly::scale(block_weight.clone(), &DPoly::sum(inner)));
        block_weight = &block_weight * &zk;
    }
    DPoly::sum(outer)
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    version: u32,
    n: usize,
    fingerprint: String,
    family: Vec<String>,
    p: String,
    d: Vec<String>,
    plan: MergePlan,
    basis: IdempotentBasis,
}

impl Serialize for DsBundle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BundleJson {
            version: 1,
            n: self.n,
            fingerprint: self.fingerprint.clone(),
            family: self.family.iter().map(graph6_emit).collect(),
            p: print(&self.p),
            d: self.d.iter().map(print).collect(),
            plan: self.plan.clone(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DsBundle {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BundleJson::deserialize(de)?;
        if raw.version != 1 {
            return Err(D::Error::custom(format!("unsupported bundle version {}", raw.version)));
        }
        let family: Vec<Graph> = raw.family.iter().map(|s| graph6_parse(s)).collect::<Result<_>>().map_err(D::Error::custom)?;
        let found = fingerprint(&family);
        if found != raw.fingerprint {
            return Err(D::Error::custom(Error::Fingerprint { expected: raw.fingerprint, found }));
        }
        let p = parse(&raw.p).map_err(D::Error::custom)?;
        let d = raw.d.iter().map(|t| parse(t)).collect::<Result<_>>().map_err(D::Error::custom)?;
        Ok(DsBundle { n: raw.n, family, fingerprint: raw.fingerprint, p, d, basis: raw.basis, plan: raw.plan })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::is_full;
    use crate::dpoly::eval;
    use crate::exactcore::{char_poly, Field};
    use crate::graphlab::enumerate_graphs;
    use crate::specpipe::{demerge, merge, natural_spectrum};

    /// The eight 6-vertex graphs whose double algebra is all of `M_6`.
    pub(crate) const FULL_SIX: [&str; 8] = ["E\\Q?", "E|Q?", "Elq?", "EZq?", "Ezq?", "EnY?", "Efj?", "Enj?"];

    fn full_six() -> Vec<Graph> {
        FULL_SIX.iter().map(|s| graph6_parse(s).unwrap()).collect()
    }

    #[test]
    fn merged_value_is_the_weighted_sum_of_d() {
        let fam = enumerate_graphs(4).unwrap();
        let b = build_ds_dpoly(&fam).unwrap();
        assert_eq!(b.plan.m, b.d.len());
        for g in &fam {
            let a = g.adjacency();
            let dv: Vec<Matrix> = b.d.iter().map(|d| eval(d, &a)).collect();
            assert_eq!(eval(&b.p, &a), merge(&b.plan, &dv).unwrap());
            // every d value is symmetric and nonzero on some member
            assert!(dv.iter().all(Matrix::is_symmetric));
        }
        for d in &b.d {
            assert!(fam.iter().any(|g| !eval(d, &g.adjacency()).is_zero()));
        }
    }

    #[test]
    fn full_members_demerge_and_separate() {
        let fam = full_six();
        assert!(fam.iter().all(|g| is_full(&g.adjacency())));
        let b = build_ds_dpoly(&fam).unwrap();
        let specs: Vec<_> = fam.iter().map(|g| natural_spectrum(&b.p, g)).collect();
        for (g, s) in fam.iter().zip(&specs) {
            let a = g.adjacency();
            let direct: Vec<_> = b.d.iter().map(|d| char_poly(&eval(d, &a))).collect();
            assert_eq!(demerge(s, &b.plan).unwrap(), direct);
        }
        for i in 0..specs.len() {
            for j in 0..i {
                assert_ne!(specs[i], specs[j]);
            }
        }
    }

    #[test]
    fn d_values_on_full_members_are_edges_or_doubled_loops() {
        let fam = full_six();
        let b = build_ds_dpoly(&fam).unwrap();
        let n = 6;
        let two = Rational::from_integer(2);
        let mut loops = 0;
        for g in &fam {
            let a = g.adjacency();
            for d in &b.d {
                let v = eval(d, &a);
                let nz: Vec<(usize, usize)> = (0..n * n).map(|p| (p / n, p % n)).filter(|&(i, j)| !v.get(i, j).is_zero()).collect();
                match nz.as_slice() {
                    [] => {}
                    [(i, j)] if i == j && *v.get(*i, *j) == two => loops += 1,
                    [(i, j), (k, l)] if i != j && (i, j) == (l, k) => assert!(v.is_zero_one()),
                    other => panic!("unexpected support {other:?}"),
                }
            }
        }
        // c = E_st • A • E_us lands on the diagonal, so c + σ(c) is 2·E_ss there
        assert!(loops > 0);
    }

    #[test]
    fn relabeling_preserves_the_spectrum() {
        use crate::graphlab::random::{random_permutation, sample_rng};
        let fam = enumerate_graphs(4).unwrap();
        let b = build_ds_dpoly(&fam).unwrap();
        let mut rng = sample_rng(5, 0);
        for g in &fam {
            let s = natural_spectrum(&b.p, g);
            for _ in 0..5 {
                let h = g.permuted(&random_permutation(4, &mut rng));
                assert_eq!(natural_spectrum(&b.p, &h), s);
            }
        }
    }

    #[test]
    fn rejects_bad_families() {
        assert!(matches!(build_ds_dpoly(&[]), Err(Error::EmptyFamily)));
        assert!(matches!(build_ds_dpoly(&[Graph::empty(2), Graph::empty(3)]), Err(Error::MixedSizes)));
    }

    #[test]
    fn bundle_round_trip_checks_fingerprint() {
        let fam = enumerate_graphs(3).unwrap();
        let b = build_ds_dpoly(&fam).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        let back: DsBundle = serde_json::from_str(&text).unwrap();
        assert_eq!(back.p, b.p);
        assert_eq!(back.d, b.d);
        assert_eq!(back.plan, b.plan);
        assert_eq!(back.fingerprint, b.fingerprint);
        let tampered = text.replace(&b.fingerprint, &"0".repeat(64));
        assert!(serde_json::from_str::<DsBundle>(&tampered).unwrap_err().to_string().contains("fingerprint"));
        // order of the family does not matter
        let mut rev = fam.clone();
        rev.reverse();
        assert_eq!(fingerprint(&rev), b.fingerprint);
    }
}
