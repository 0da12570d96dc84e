//! Merging several spectra into one: `Spec(Σ a_i A_i)` determines every
//! `Spec A_i` when the weights are spread far enough apart.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::scalar::{balanced_mod, round_div};
use crate::exactcore::{charpoly_from_traces, traces_from_charpoly, Matrix, Rational, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    /// `M_i = M_{i−1} + z_i A_i`, each `z_i` sized for the block below it.
    Nested,
    /// Geometric weights `z^{i−1}` for summands that are each `0`,
    /// `E_uv + E_vu` with `u ≠ v`, or `2E_uu`.
    EdgeIndicator,
}

/// Weights for merging `m` integer matrices of size `n` with entries bounded by `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergePlan {
    pub kind: PlanKind,
    pub m: usize,
    pub b: u64,
    pub n: usize,
    /// Nested: `z_2..z_m`. Edge indicator: the single base `z`.
    #[serde(with = "decimal_vec")]
    pub z: Vec<BigInt>,
}

mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// `2·n·(n·b)^n + 1`.
pub fn base_bound(n: usize, b: &BigInt) -> BigInt {
    BigInt::from(2 * n) * (BigInt::from(n) * b).pow(n as u32) + 1
}

/// Whether base `z` separates a top block with entries `≤ b` from a lower
/// block with entries `≤ big`, for traces of powers `1..=n`:
/// `(n·big)^k < z/2` (the remainder is exact) and
/// `n^k·((b + big/z)^k − b^k) < 1/2` (rounding is exact).
fn separates(n: usize, b: &BigInt, big: &BigInt, z: &BigInt) -> bool {
    let nb = BigInt::from(n);
    (1..=n as u32).all(|k| {
        let low = (&nb * big).pow(k) * 2 < *z;
        // 2·n^k·((b·z + big)^k − (b·z)^k) < z^k
        let bz = b * z;
        let err = nb.pow(k) * ((&bz + big).pow(k) - bz.pow(k)) * 2;
        low && err < z.pow(k)
    })
}

/// Smallest `z ≥ 2n(n·big)^n + 1` that [`separates`].
fn smallest_base(n: usize, b: &BigInt, big: &BigInt) -> BigInt {
    let lo = base_bound(n, big);
    if separates(n, b, big, &lo) {
        return lo;
    }
    let mut hi = &lo * 2;
    while !separates(n, b, big, &hi) {
        hi *= 2;
    }
    // lo fails, hi passes; the conditions are monotone in z
    let mut lo = lo;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if separates(n, b, big, &mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Nested plan: stage `i` adds `z_i A_i` on top of `M_{i−1} = Σ_{j<i} a_j A_j`,
/// whose entries are bounded by `b·Σ_{j<i} a_j`.
pub fn make_merge_plan(m: usize, b: u64, n: usize) -> Result<MergePlan> {
    if m == 0 || b == 0 || n == 0 {
        return Err(Error::InvalidArgument("merge plan needs m, b, n >= 1".into()));
    }
    let bb = BigInt::from(b);
    let mut z = Vec::with_capacity(m - 1);
    let mut total = BigInt::one();
    for _ in 1..m {
        let zi = smallest_base(n, &bb, &(&bb * &total));
        total += &zi;
        z.push(zi);
    }
    Ok(MergePlan { kind: PlanKind::Nested, m, b, n, z })
}

/// Geometric plan for `m` summands of the [`PlanKind::EdgeIndicator`] shape:
/// `z = max(2n·n^n + 1, 4m + 1)`.
pub fn edge_indicator_plan(m: usize, n: usize) -> Result<MergePlan> {
    if n == 0 {
        return Err(Error::InvalidArgument("merge plan needs n >= 1".into()));
    }
    let z = base_bound(n, &BigInt::one()).max(BigInt::from(4 * m + 1));
    Ok(MergePlan { kind: PlanKind::EdgeIndicator, m, b: 1, n, z: vec![z] })
}

impl MergePlan {
    pub fn weights(&self) -> Vec<BigInt> {
        match self.kind {
            PlanKind::Nested => std::iter::once(BigInt::one()).chain(self.z.iter().cloned()).collect(),
            PlanKind::EdgeIndicator => {
                let mut w = Vec::with_capacity(self.m);
                let mut cur = BigInt::one();
                for _ in 0..self.m {
                    w.push(cur.clone());
                    cur *= &self.z[0];
                }
                w
            }
        }
    }
}

/// `Σ a_i A_i`.
pub fn merge(plan: &MergePlan, mats: &[Matrix]) -> Result<Matrix> {
    if mats.len() != plan.m {
        return Err(Error::InvalidArgument(format!("plan is for {} matrices, got {}", plan.m, mats.len())));
    }
    let mut acc = Matrix::zero(plan.n);
    for (w, a) in plan.weights().into_iter().zip(mats) {
        acc = acc.add(&a.scale(&Rational::from_bigint(w)))?;
    }
    Ok(acc)
}

fn integer_traces(s: &Spectrum, stage: usize) -> Result<Vec<BigInt>> {
    traces_from_charpoly(s).iter().map(|t| t.to_integer().ok_or(Error::NonIntegerTrace { stage })).collect()
}

fn spectrum_of(traces: &[BigInt]) -> Spectrum {
    charpoly_from_traces(&traces.iter().cloned().map(Rational::from_bigint).collect::<Vec<_>>())
}

/// Recovers `Spec A_1, …, Spec A_m` from `Spec(Σ a_i A_i)`.
///
/// Nested plans peel the top stage off by rounding `tr M_i^k / z_i^k` and
/// keep the balanced remainder `tr M_i^k mod z_i` (range `(−z/2, z/2]`, which
/// also covers negative traces) for the block below. Edge-indicator plans
/// read the base-`z` digits of `tr M²`.
pub fn demerge(s: &Spectrum, plan: &MergePlan) -> Result<Vec<Spectrum>> {
    if s.n != plan.n {
        return Err(Error::DimensionMismatch { left: plan.n, right: s.n });
    }
    match plan.kind {
        PlanKind::Nested => demerge_nested(s, plan),
        PlanKind::EdgeIndicator => demerge_edges(s, plan),
    }
}

fn demerge_nested(s: &Spectrum, plan: &MergePlan) -> Result<Vec<Spectrum>> {
    let mut traces = integer_traces(s, plan.m)?;
    let mut out = Vec::with_capacity(plan.m);
    for stage in (2..=plan.m).rev() {
        let z = &plan.z[stage - 2];
        let mut top = Vec::with_capacity(plan.n);
        let mut rest = Vec::with_capacity(plan.n);
        for (k, t) in traces.iter().enumerate() {
            let zk = z.pow(k as u32 + 1);
            top.push(round_div(t, &zk).ok_or_else(|| Error::Demerge(format!("rounding tie at stage {stage}")))?);
            rest.push(balanced_mod(t, z));
        }
        out.push(spectrum_of(&top));
        traces = rest;
    }
    out.push(spectrum_of(&traces));
    out.reverse();
    Ok(out)
}

fn demerge_edges(s: &Spectrum, plan: &MergePlan) -> Result<Vec<Spectrum>> {
    let traces = integer_traces(s, 0)?;
    let n = plan.n;
    if n < 2 || plan.m == 0 {
        return Ok(vec![Spectrum::nilpotent(n); plan.m]);
    }
    if traces[0].is_negative() || traces[1].is_negative() {
        return Err(Error::Demerge("summands must have nonnegative traces".into()));
    }
    let z = &plan.z[0];
    // tr M: digit i is tr D_i, 2 for a diagonal summand and 0 otherwise
    let diag = digits(&traces[0], z, plan.m)?;
    // tr M²: digit 2i is tr D_i² plus twice Σ tr(D_j D_k) over j < i < k, j + k = 2i.
    // Each tr(D_j D_k) is 0, 2 or 4, so the digit is 2 mod 4 exactly for an edge summand.
    let square = digits(&traces[1], z, 2 * plan.m - 1)?;
    // t^n − t^{n−2} for an edge, t^n − 2t^{n−1} for 2E_uu
    let mut edge = vec![Rational::from_integer(0); n + 1];
    edge[0] = Rational::from_integer(1);
    edge[2] = Rational::from_integer(-1);
    let edge = Spectrum::new(edge)?;
    let mut loop_ = vec![Rational::from_integer(0); n + 1];
    loop_[0] = Rational::from_integer(1);
    loop_[1] = Rational::from_integer(-2);
    let loop_ = Spectrum::new(loop_)?;
    let four = BigInt::from(4);
    (0..plan.m)
        .map(|i| {
            let is_loop = match diag[i].to_u8() {
                Some(0) => false,
                Some(2) => true,
                _ => return Err(Error::Demerge(format!("summand {} has trace {}", i + 1, diag[i]))),
            };
            let r = square[2 * i].mod_floor(&four);
            match (is_loop, r.to_u8()) {
                (true, Some(0)) => Ok(loop_.clone()),
                (false, Some(2)) => Ok(edge.clone()),
                (false, Some(0)) => Ok(Spectrum::nilpotent(n)),
                _ => Err(Error::Demerge(format!("summand {} is not of the expected shape", i + 1))),
            }
        })
        .collect()
}

/// The lowest `count` base-`z` digits of `v`; the rest must be zero.
fn digits(v: &BigInt, z: &BigInt, count: usize) -> Result<Vec<BigInt>> {
    let mut rest = v.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (q, r) = rest.div_mod_floor(z);
        out.push(r);
        rest = q;
    }
    if !rest.is_zero() {
        return Err(Error::Demerge("trace exceeds the plan's range".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::char_poly;
    use crate::graphlab::random::sample_rng;
    use rand::Rng;

    fn mats_2x2() -> Vec<Matrix> {
        (0..16u32)
            .map(|bits| Matrix::from_fn(2, |i, j| Rational::from_integer((bits >> (2 * i + j) & 1) as i64)))
            .collect()
    }

    #[test]
    fn plan_shapes() {
        let p1 = make_merge_plan(1, 1, 3).unwrap();
        assert_eq!(p1.weights(), vec![BigInt::one()]);
        let p2 = make_merge_plan(2, 1, 2).unwrap();
        assert_eq!(p2.weights(), vec![BigInt::one(), BigInt::from(17)]);
        assert_eq!(base_bound(2, &BigInt::one()), BigInt::from(17));
        let p3 = make_merge_plan(3, 1, 2).unwrap();
        let w = p3.weights();
        assert!(w.windows(2).all(|x| x[0] < x[1]));
        assert!(p3.z.iter().all(|z| *z > BigInt::from(16)));
        assert!(make_merge_plan(0, 1, 2).is_err());
    }

    #[test]
    fn documented_bound_is_not_always_enough() {
        // n = 4, b = 1: z = 2049 gives a rounding error just above 1/2 on A_1 = A_2 = J
        let z = base_bound(4, &BigInt::one());
        assert_eq!(z, BigInt::from(2049));
        assert!(!separates(4, &BigInt::one(), &BigInt::one(), &z));
        let j = Matrix::ones(4);
        let merged = j.add(&j.scale(&Rational::from_bigint(z.clone()))).unwrap();
        let t4 = merged.trace_powers(4)[3].to_integer().unwrap();
        assert_eq!(round_div(&t4, &z.pow(4)), Some(BigInt::from(257)));
        assert_eq!(j.trace_powers(4)[3], Rational::from_integer(256));
        assert!(make_merge_plan(2, 1, 4).unwrap().z[0] > z);
    }

    #[test]
    fn geometric_weights_fail_for_three_summands() {
        // weights (1, 17, 289) on J_2 three times: rounding tr M² / 17⁴ gives 5, not tr J² = 4
        let m = Matrix::ones(2).scale(&Rational::from_integer(1 + 17 + 289));
        let t2 = m.trace_powers(2)[1].to_integer().unwrap();
        assert_eq!(round_div(&t2, &BigInt::from(17).pow(4)), Some(BigInt::from(5)));
        let plan = make_merge_plan(3, 1, 2).unwrap();
        let mats = vec![Matrix::ones(2); 3];
        let got = demerge(&char_poly(&merge(&plan, &mats).unwrap()), &plan).unwrap();
        assert!(got.iter().all(|s| *s == char_poly(&Matrix::ones(2))));
    }

    #[test]
    fn exhaustive_pairs_of_2x2_01_matrices() {
        let plan = make_merge_plan(2, 1, 2).unwrap();
        let ms = mats_2x2();
        let mut cases = 0;
        for a in &ms {
            for b in &ms {
                let s = char_poly(&merge(&plan, &[a.clone(), b.clone()]).unwrap());
                assert_eq!(demerge(&s, &plan).unwrap(), vec![char_poly(a), char_poly(b)]);
                cases += 1;
            }
        }
        assert_eq!(cases, 256);
    }

    #[test]
    fn random_tuples() {
        let mut rng = sample_rng(11, 0);
        for _ in 0..100 {
            let n = rng.random_range(1..=10);
            let m = rng.random_range(1..=4);
            let mats: Vec<Matrix> =
                (0..m).map(|_| Matrix::from_fn(n, |_, _| Rational::from_integer(rng.random_range(-1..=1)))).collect();
            let plan = make_merge_plan(m, 1, n).unwrap();
            let s = char_poly(&merge(&plan, &mats).unwrap());
            let want: Vec<Spectrum> = mats.iter().map(char_poly).collect();
            assert_eq!(demerge(&s, &plan).unwrap(), want);
        }
    }

    #[test]
    fn edge_indicator_digits() {
        let n = 5;
        let e = |s: usize, t: usize| Matrix::unit(n, s, t).add(&Matrix::unit(n, t, s)).unwrap();
        // repeated summands exercise the cross terms
        let d = |s: usize| Matrix::unit(n, s, s).scale(&Rational::from_integer(2));
        let mats = vec![e(0, 1), Matrix::zero(n), d(3), e(0, 1), e(2, 4), d(3), Matrix::zero(n), e(2, 4), e(1, 3), d(0)];
        let plan = edge_indicator_plan(mats.len(), n).unwrap();
        let s = char_poly(&merge(&plan, &mats).unwrap());
        let want: Vec<Spectrum> = mats.iter().map(char_poly).collect();
        assert_eq!(demerge(&s, &plan).unwrap(), want);
        assert!(demerge(&char_poly(&Matrix::identity(n)), &plan).is_err());
    }

    #[test]
    fn edge_indicator_random_summands() {
        let mut rng = sample_rng(12, 0);
        for _ in 0..200 {
            let n = rng.random_range(2..=6);
            let m = rng.random_range(1..=12);
            let mats: Vec<Matrix> = (0..m)
                .map(|_| {
                    let (s, t) = (rng.random_range(0..n), rng.random_range(0..n));
                    match rng.random_range(0..3) {
                        0 => Matrix::zero(n),
                        _ if s == t => Matrix::unit(n, s, s).scale(&Rational::from_integer(2)),
                        _ => Matrix::unit(n, s, t).add(&Matrix::unit(n, t, s)).unwrap(),
                    }
                })
                .collect();
            let plan = edge_indicator_plan(m, n).unwrap();
            let s = char_poly(&merge(&plan, &mats).unwrap());
            let want: Vec<Spectrum> = mats.iter().map(char_poly).collect();
            assert_eq!(demerge(&s, &plan).unwrap(), want);
        }
    }

    #[test]
    fn plan_json_uses_decimal_strings() {
        let plan = make_merge_plan(3, 1, 3).unwrap();
        let text = serde_json::to_string(&plan).unwrap();
        assert!(text.contains("\"z\":[\""));
        assert_eq!(serde_json::from_str::<MergePlan>(&text).unwrap(), plan);
        assert!(plan.weights().iter().all(|w| w.is_positive()));
    }
}
