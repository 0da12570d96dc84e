use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PositionSet;
use crate::dpoly::{parse, print, DPoly};
use crate::error::{Error, Result};
use crate::exactcore::Matrix;

/// One basis element: its defining polynomial (if known) and its 0/1 value
/// on each family member.
#[derive(Clone, Debug)]
pub struct BasisEntry {
    pub dpoly: Option<DPoly>,
    pub values: Vec<PositionSet>,
}

/// An ordered list of ∘-idempotents indexed by family member.
///
/// On every member the nonzero values are pairwise disjoint. A basis built
/// universally also covers every position on every member; [`check`]
/// verifies both, and the pairing when present.
///
/// [`check`]: IdempotentBasis::check
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    n: usize,
    members: usize,
    entries: Vec<BasisEntry>,
    pairing: Option<Vec<usize>>,
}

impl IdempotentBasis {
    pub fn new(n: usize, members: usize, entries: Vec<BasisEntry>, pairing: Option<Vec<usize>>) -> Result<Self> {
        if entries.iter().any(|e| e.values.len() != members) {
            return Err(Error::InvalidArgument("every entry needs one value per family member".into()));
        }
        if let Some(p) = &pairing {
            if p.len() != entries.len() || p.iter().enumerate().any(|(i, &j)| j >= p.len() || p[j] != i) {
                return Err(Error::InvalidArgument("pairing is not an involution on entry indices".into()));
            }
        }
        Ok(IdempotentBasis { n, members, entries, pairing })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> usize {
        self.members
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn dpoly(&self, i: usize) -> Option<&DPoly> {
        self.entries[i].dpoly.as_ref()
    }

    pub fn dpolys(&self) -> Option<Vec<DPoly>> {
        self.entries.iter().map(|e| e.dpoly.clone()).collect()
    }

    pub fn positions(&self, i: usize, member: usize) -> &PositionSet {
        &self.entries[i].values[member]
    }

    pub fn value(&self, i: usize, member: usize) -> Matrix {
        self.entries[i].values[member].to_matrix(self.n)
    }

    /// Indices of entries that are nonzero on `member`, in basis order.
    pub fn realized_on(&self, member: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.entries[i].values[member].is_empty()).collect()
    }

    /// The nonzero values on `member` as matrices, in basis order.
    pub fn values_on(&self, member: usize) -> Vec<Matrix> {
        self.realized_on(member).into_iter().map(|i| self.value(i, member)).collect()
    }

    pub fn pairing(&self) -> Option<&[usize]> {
        self.pairing.as_deref()
    }

    /// Disjoint nonzero values on every member, and the pairing property.
    pub fn check_orthogonal(&self) -> Result<()> {
        let len = self.n * self.n;
        for m in 0..self.members {
            let mut seen = PositionSet::empty(len);
            for (i, e) in self.entries.iter().enumerate() {
                if e.values[m].intersects(&seen) {
                    return Err(Error::WeakBasis(format!("entry {i} overlaps an earlier entry on member {m}")));
                }
                seen = seen.union(&e.values[m]);
            }
        }
        if let Some(p) = &self.pairing {
            for (i, e) in self.entries.iter().enumerate() {
                for m in 0..self.members {
                    if e.values[m].transposed(self.n) != self.entries[p[i]].values[m] {
                        return Err(Error::WeakBasis(format!("entry {i} and its partner {} are not transposes on member {m}", p[i])));
                    }
                }
            }
        }
        Ok(())
    }

    /// [`check_orthogonal`](Self::check_orthogonal), plus the values on every member sum to `J`.
    pub fn check(&self) -> Result<()> {
        self.check_orthogonal()?;
        let full = PositionSet::full(self.n * self.n);
        for m in 0..self.members {
            let cover = self.entries.iter().fold(PositionSet::empty(self.n * self.n), |acc, e| acc.union(&e.values[m]));
            if cover != full {
                return Err(Error::WeakBasis(format!("values on member {m} do not sum to J")));
            }
        }
        Ok(())
    }

    /// Drops entries that vanish on every member, renumbering the pairing.
    pub fn pruned(self) -> Self {
        let keep: Vec<bool> = self.entries.iter().map(|e| e.values.iter().any(|v| !v.is_empty())).collect();
        let mut index = vec![usize::MAX; keep.len()];
        let mut next = 0;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                index[i] = next;
                next += 1;
            }
        }
        let pairing = self.pairing.as_ref().map(|p| (0..p.len()).filter(|&i| keep[i]).map(|i| index[p[i]]).collect());
        let entries = self.entries.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e).collect();
        IdempotentBasis { n: self.n, members: self.members, entries, pairing }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    dpoly: Option<String>,
    /// Nonzero values keyed by family index.
    values: BTreeMap<usize, Matrix>,
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    n: usize,
    members: usize,
    entries: Vec<EntryJson>,
    pairing: Option<Vec<usize>>,
}

impl Serialize for IdempotentBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|e| EntryJson {
                dpoly: e.dpoly.as_ref().map(print),
                values: e
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(m, v)| (m, v.to_matrix(self.n)))
                    .collect(),
            })
            .collect();
        BasisJson { n: self.n, members: self.members, entries, pairing: self.pairing.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdempotentBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BasisJson::deserialize(d)?;
        let len = raw.n * raw.n;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for e in raw.entries {
            let dpoly = e.dpoly.as_deref().map(parse).transpose().map_err(D::Error::custom)?;
            let mut values = vec![PositionSet::empty(len); raw.members];
            for (m, v) in e.values {
                if m >= raw.members || v.n() != raw.n {
                    return Err(D::Error::custom("value outside the family or of the wrong size"));
                }
                values[m] = PositionSet::from_matrix(&v).ok_or_else(|| D::Error::custom("value is not a 0/1 matrix"))?;
            }
            entries.push(BasisEntry { dpoly, values });
        }
        let b = IdempotentBasis::new(raw.n, raw.members, entries, raw.pairing).map_err(D::Error::custom)?;
        b.check_orthogonal().map_err(D::Error::custom)?;
        Ok(b)
    }
}
