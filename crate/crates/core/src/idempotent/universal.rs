use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::{BasisEntry, IdempotentBasis, PositionSet};
use crate::dpoly::{eval, proj_poly, DPoly, Evaluator};
use crate::error::{Error, Result};
use crate::exactcore::{Field, Matrix, Rational};

pub(crate) fn family_size(family: &[Matrix]) -> Result<usize> {
    let n = family.first().ok_or(Error::EmptyFamily)?.n();
    if family.iter().any(|a| a.n() != n) {
        return Err(Error::MixedSizes);
    }
    Ok(n)
}

/// Output of [`universal_basis`], keeping what is needed to rebuild each
/// atom in its literal product form.
#[derive(Clone, Debug)]
pub struct UniversalBasis {
    pub basis: IdempotentBasis,
    /// Union of the ∘-spectra of all `b(a)`, ascending.
    pub lambda: Vec<Rational>,
    pub generators: Vec<DPoly>,
    /// `proj(Λ, λ_l) ∗ b_k` at index `k·|Λ| + l`.
    pub c_polys: Vec<DPoly>,
    /// For each entry, the index `l` of the value `λ_l` every generator takes on it.
    pub keys: Vec<Vec<usize>>,
}

impl UniversalBasis {
    /// The set `X ⊆ C` of entry `i`: the `c` that vanish on the atom.
    pub fn subset(&self, i: usize) -> Vec<usize> {
        let l = self.lambda.len();
        let key = &self.keys[i];
        (0..self.c_polys.len()).filter(|&c| key[c / l] != c % l).collect()
    }

    /// `d_X = ∘∏_{c∈C} (J − c if c ∈ X, else c)` for entry `i`, with all `|C|` factors.
    pub fn d_x(&self, i: usize) -> DPoly {
        let l = self.lambda.len();
        let key = &self.keys[i];
        let j = DPoly::circ_one();
        DPoly::circ_all(
            self.c_polys.iter().enumerate().map(|(c, p)| if key[c / l] == c % l { p.clone() } else { j.sub(p) }),
        )
    }
}

/// A universal ∘-idempotent basis for `family` refining the given generators.
///
/// Positions of each member are grouped by the vector of values the
/// generators take there; each distinct vector is one realized atom `d_X`.
/// Atoms are ordered by first realizing member, then smallest position.
/// The reconstruction identity `b(a) = Σ_λ λ·proj(Λ, λ)(b(a))` is checked on
/// every generator and member.
pub fn universal_basis(family: &[Matrix], generators: &[DPoly]) -> Result<UniversalBasis> {
    let n = family_size(family)?;
    let len = n * n;
    // values[m][k] = b_k(a_m)
    let values: Vec<Vec<Matrix>> = family
        .par_iter()
        .map(|a| {
            let mut ev = Evaluator::new(a);
            generators.iter().map(|b| (*ev.eval(b)).clone()).collect()
        })
        .collect();
    let lambda: Vec<Rational> = values.iter().flatten().flat_map(|m| m.entries().iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let projs: Vec<DPoly> = lambda.iter().map(|l| proj_poly(&lambda, l)).collect::<Result<_>>()?;
    check_reconstruction(&values, &lambda, &projs)?;

    let index: HashMap<&Rational, usize> = lambda.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut atom_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut sets: Vec<Vec<PositionSet>> = Vec::new();
    for (m, vals) in values.iter().enumerate() {
        for p in 0..len {
            let key: Vec<usize> = vals.iter().map(|v| index[&v.entries()[p]]).collect();
            let id = *atom_of.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                sets.push(vec![PositionSet::empty(len); family.len()]);
                sets.len() - 1
            });
            sets[id][m].insert(p);
        }
    }

    let c_polys: Vec<DPoly> = generators.iter().flat_map(|b| projs.iter().map(move |pr| pr.compose(b))).collect();
    // a generator that takes one value everywhere contributes c = J to every atom
    let constant: Vec<Option<usize>> = (0..generators.len())
        .map(|k| {
            let first = keys[0][k];
            keys.iter().all(|key| key[k] == first).then_some(first)
        })
        .collect();
    let l = lambda.len();
    let entries = keys
        .iter()
        .zip(sets)
        .map(|(key, values)| {
            let factors = (0..generators.len()).filter(|&k| constant[k].is_none()).map(|k| c_polys[k * l + key[k]].clone());
            BasisEntry { dpoly: Some(DPoly::circ_all(factors)), values }
        })
        .collect();
    let basis = IdempotentBasis::new(n, family.len(), entries, None)?;
    Ok(UniversalBasis { basis, lambda, generators: generators.to_vec(), c_polys, keys })
}

/// Each `proj(Λ, λ)(b(a))` must be the indicator of the `λ` entries, and the
/// weighted sum must give back `b(a)`.
fn check_reconstruction(values: &[Vec<Matrix>], lambda: &[Rational], projs: &[DPoly]) -> Result<()> {
    values.par_iter().flatten().try_for_each(|v| {
        let mut sum = Matrix::zero(v.n());
        for (l, pr) in lambda.iter().zip(projs) {
            let e = eval(pr, v);
            let fiber = v.map(|x| if x == l { Rational::one() } else { Rational::zero() });
            if e != fiber {
                return Err(Error::WeakBasis(format!("projection onto {l} is not the indicator of its entries")));
            }
            sum = sum.add(&e.scale(l))?;
        }
        if &sum != v {
            return Err(Error::WeakBasis("projections do not reconstruct the matrix".into()));
        }
        Ok(())
    })
}

/// Result of [`universal_basis_full`].
#[derive(Clone, Debug)]
pub struct FullBasisRun {
    pub basis: IdempotentBasis,
    /// Number of refinement rounds performed after the initial basis.
    pub rounds: usize,
    /// False if the depth cap was hit first; `basis` is then the last level reached.
    pub stabilized: bool,
}

/// Working partition of every member's positions into global atoms.
struct Atoms {
    n: usize,
    members: usize,
    dpolys: Vec<DPoly>,
    /// (member, position) list per atom; empty once split.
    cells: Vec<Vec<(u32, u32)>>,
    /// atom id per member and position
    assign: Vec<Vec<u32>>,
}

impl Atoms {
    fn from_basis(b: &IdempotentBasis) -> Self {
        let len = b.n() * b.n();
        let mut assign = vec![vec![u32::MAX; len]; b.members()];
        let mut cells = vec![Vec::new(); b.len()];
        for (i, e) in b.entries().iter().enumerate() {
            for (m, v) in e.values.iter().enumerate() {
                for p in v.iter() {
                    assign[m][p] = i as u32;
                    cells[i].push((m as u32, p as u32));
                }
            }
        }
        let dpolys = b.entries().iter().map(|e| e.dpoly.clone().expect("universal entries carry polynomials")).collect();
        Atoms { n: b.n(), members: b.members(), dpolys, cells, assign }
    }

    /// Splits `atom` by the values of one generator; `hits` lists its nonzero
    /// entries on the atom, every other position of the atom has value 0.
    fn split(&mut self, atom: u32, hits: &[(u32, u32, u32)], c_poly: &mut impl FnMut(u32) -> DPoly) {
        let cell = std::mem::take(&mut self.cells[atom as usize]);
        let mut at: HashMap<(u32, u32), u32> = HashMap::with_capacity(hits.len());
        for &(m, p, v) in hits {
            at.insert((m, p), v);
        }
        let mut lambdas: BTreeSet<u32> = hits.iter().map(|h| h.2).collect();
        if cell.len() > hits.len() {
            lambdas.insert(0);
        }
        if lambdas.len() == 1 {
            self.cells[atom as usize] = cell;
            return;
        }
        let parent = self.dpolys[atom as usize].clone();
        let mut child: BTreeMap<u32, u32> = BTreeMap::new();
        for &l in &lambdas {
            child.insert(l, self.dpolys.len() as u32);
            self.dpolys.push(DPoly::circ(&parent, &c_poly(l)));
            self.cells.push(Vec::new());
        }
        for (m, p) in cell {
            let l = at.get(&(m, p)).copied().unwrap_or(0);
            let id = child[&l];
            self.assign[m as usize][p as usize] = id;
            self.cells[id as usize].push((m, p));
        }
    }

    /// Live atoms renumbered by (first member, smallest position).
    fn to_basis(&self) -> IdempotentBasis {
        let len = self.n * self.n;
        let mut order: HashMap<u32, usize> = HashMap::new();
        let mut entries: Vec<BasisEntry> = Vec::new();
        for m in 0..self.members {
            for p in 0..len {
                let a = self.assign[m][p];
                let id = *order.entry(a).or_insert_with(|| {
                    entries.push(BasisEntry { dpoly: Some(self.dpolys[a as usize].clone()), values: vec![PositionSet::empty(len); self.members] });
                    entries.len() - 1
                });
                entries[id].values[m].insert(p);
            }
        }
        IdempotentBasis::new(self.n, self.members, entries, None).expect("consistent shapes")
    }
}

fn cells_per_member(b: &IdempotentBasis) -> Vec<usize> {
    (0..b.members()).map(|m| b.realized_on(m).len()).collect()
}

/// A universal ∘-idempotent basis for `{F⟨⟨a⟩⟩ : a ∈ family}`.
///
/// Starts from the universal basis of `{I, x}` and repeatedly refines by all
/// •-products `α • β` of atoms realized together on some member. The value
/// of `α • β` at `(u, v)` counts the `w` with `(u, w) ∈ α` and `(w, v) ∈ β`,
/// so it is computed from the atom partitions without evaluating
/// polynomials. Atoms are split one product at a time, and only where the
/// product is not constant on the atom across the whole family, which keeps
/// the polynomials small.
pub fn universal_basis_full(family: &[Matrix], depth_cap: usize) -> Result<FullBasisRun> {
    let n = family_size(family)?;
    let len = n * n;
    let mut current = universal_basis(family, &[DPoly::bullet_one(), DPoly::x()])?.basis;
    let mut counts = cells_per_member(&current);
    for round in 0..depth_cap {
        let prev = Atoms::from_basis(&current);
        // nonzero entries of each product α • β, keyed by (α, β)
        let per_member: Vec<Vec<((u32, u32), u32, u32)>> = (0..family.len())
            .into_par_iter()
            .map(|m| {
                let c = &prev.assign[m];
                let mut out = Vec::new();
                for p in 0..len {
                    let (u, v) = (p / n, p % n);
                    let mut pairs: Vec<(u32, u32)> = (0..n).map(|w| (c[u * n + w], c[w * n + v])).collect();
                    pairs.sort_unstable();
                    for run in pairs.chunk_by(|x, y| x == y) {
                        out.push((run[0], p as u32, run.len() as u32));
                    }
                }
                out
            })
            .collect();
        let mut products: BTreeMap<(u32, u32), Vec<(u32, u32, u32)>> = BTreeMap::new();
        for (m, list) in per_member.into_iter().enumerate() {
            for (key, p, v) in list {
                products.entry(key).or_default().push((m as u32, p, v));
            }
        }
        let full = family.len() * len;
        let mut lambda: BTreeSet<u32> = products.values().flatten().map(|h| h.2).collect();
        if products.values().any(|hits| hits.len() < full) {
            lambda.insert(0);
        }
        let lambda_q: Vec<Rational> = lambda.iter().map(|&v| Rational::from_integer(v as i64)).collect();
        let projs: BTreeMap<u32, DPoly> =
            lambda.iter().zip(&lambda_q).map(|(&v, q)| Ok((v, proj_poly(&lambda_q, q)?))).collect::<Result<_>>()?;

        let mut atoms = Atoms { n, members: family.len(), dpolys: prev.dpolys.clone(), cells: prev.cells.clone(), assign: prev.assign.clone() };
        for ((alpha, beta), hits) in &products {
            let mut by_atom: BTreeMap<u32, Vec<(u32, u32, u32)>> = BTreeMap::new();
            for &(m, p, v) in hits {
                by_atom.entry(atoms.assign[m as usize][p as usize]).or_default().push((m, p, v));
            }
            let mut b_poly: Option<DPoly> = None;
            let mut c_cache: HashMap<u32, DPoly> = HashMap::new();
            for (atom, list) in by_atom {
                let mut c_poly = |l: u32| {
                    let b = b_poly
                        .get_or_insert_with(|| DPoly::bullet(&prev.dpolys[*alpha as usize], &prev.dpolys[*beta as usize]))
                        .clone();
                    c_cache.entry(l).or_insert_with(|| projs[&l].compose(&b)).clone()
                };
                atoms.split(atom, &list, &mut c_poly);
            }
        }
        let next = atoms.to_basis();
        let next_counts = cells_per_member(&next);
        if next_counts == counts {
            return Ok(FullBasisRun { basis: current, rounds: round, stabilized: true });
        }
        current = next;
        counts = next_counts;
    }
    Ok(FullBasisRun { basis: current, rounds: depth_cap, stabilized: false })
}
