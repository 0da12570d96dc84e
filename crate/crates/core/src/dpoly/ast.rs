use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::exactcore::{Field, Rational};

/// Node kinds of the free double algebra.
#[derive(Clone)]
pub enum Kind {
    Var,
    /// `1•`, printed `I`.
    BulletOne,
    /// `1∘`, printed `J`.
    CircOne,
    ScalarMul(Rational, DPoly),
    /// Flattened sum; the empty sum is zero.
    Sum(Vec<DPoly>),
    BulletProd(DPoly, DPoly),
    CircProd(DPoly, DPoly),
}

struct Node {
    kind: Kind,
    hash: u64,
}

/// A double polynomial.
///
/// Cheap to clone. Subterms are shared, so a `DPoly` is a DAG; every
/// traversal in this crate memoizes on node identity.
#[derive(Clone)]
pub struct DPoly(Arc<Node>);

fn combine(tag: u8, parts: impl IntoIterator<Item = u64>, scalar: Option<&Rational>) -> u64 {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    scalar.hash(&mut h);
    for p in parts {
        p.hash(&mut h);
    }
    h.finish()
}

impl DPoly {
    fn make(kind: Kind) -> DPoly {
        let hash = match &kind {
            Kind::Var => combine(0, [], None),
            Kind::BulletOne => combine(1, [], None),
            Kind::CircOne => combine(2, [], None),
            Kind::ScalarMul(c, p) => combine(3, [p.0.hash], Some(c)),
            Kind::Sum(ts) => combine(4, ts.iter().map(|t| t.0.hash), None),
            Kind::BulletProd(a, b) => combine(5, [a.0.hash, b.0.hash], None),
            Kind::CircProd(a, b) => combine(6, [a.0.hash, b.0.hash], None),
        };
        DPoly(Arc::new(Node { kind, hash }))
    }

    // leaves are interned so every occurrence shares one node
    pub fn x() -> DPoly {
        static X: OnceLock<DPoly> = OnceLock::new();
        X.get_or_init(|| Self::make(Kind::Var)).clone()
    }

    pub fn bullet_one() -> DPoly {
        static I: OnceLock<DPoly> = OnceLock::new();
        I.get_or_init(|| Self::make(Kind::BulletOne)).clone()
    }

    pub fn circ_one() -> DPoly {
        static J: OnceLock<DPoly> = OnceLock::new();
        J.get_or_init(|| Self::make(Kind::CircOne)).clone()
    }

    pub fn zero() -> DPoly {
        Self::make(Kind::Sum(Vec::new()))
    }

    /// `c·p`, normalized: `0·p = 0`, `1·p = p`, nested multiples merge.
    pub fn scale(c: Rational, p: &DPoly) -> DPoly {
        if c.is_zero() || p.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return p.clone();
        }
        match p.kind() {
            Kind::ScalarMul(d, q) => Self::scale(&c * d, q),
            _ => Self::make(Kind::ScalarMul(c, p.clone())),
        }
    }

    /// Flattened sum; zero terms are dropped and a single term is returned as is.
    pub fn sum(terms: impl IntoIterator<Item = DPoly>) -> DPoly {
        let mut flat = Vec::new();
        for t in terms {
            match t.kind() {
                Kind::Sum(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(t),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Self::make(Kind::Sum(flat))
    }

    pub fn bullet(a: &DPoly, b: &DPoly) -> DPoly {
        Self::make(Kind::BulletProd(a.clone(), b.clone()))
    }

    pub fn circ(a: &DPoly, b: &DPoly) -> DPoly {
        Self::make(Kind::CircProd(a.clone(), b.clone()))
    }

    pub fn add(&self, other: &DPoly) -> DPoly {
        Self::sum([self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &DPoly) -> DPoly {
        Self::sum([self.clone(), Self::scale(-Rational::one(), other)])
    }

    pub fn neg(&self) -> DPoly {
        Self::scale(-Rational::one(), self)
    }

    /// Left-associated •-power; `p^0 = I`.
    pub fn bullet_pow(&self, k: u32) -> DPoly {
        Self::fold_pow(self, k, Self::bullet_one(), Self::bullet)
    }

    /// Left-associated ∘-power; `p^.0 = J`.
    pub fn circ_pow(&self, k: u32) -> DPoly {
        Self::fold_pow(self, k, Self::circ_one(), Self::circ)
    }

    fn fold_pow(p: &DPoly, k: u32, unit: DPoly, op: fn(&DPoly, &DPoly) -> DPoly) -> DPoly {
        if k == 0 {
            return unit;
        }
        let mut acc = p.clone();
        for _ in 1..k {
            acc = op(&acc, p);
        }
        acc
    }

    /// Left-folded ∘-product; empty input gives `J`.
    pub fn circ_all(factors: impl IntoIterator<Item = DPoly>) -> DPoly {
        let mut it = factors.into_iter();
        let Some(first) = it.next() else { return Self::circ_one() };
        it.fold(first, |acc, f| Self::circ(&acc, &f))
    }

    /// Left-folded •-product; empty input gives `I`.
    pub fn bullet_all(factors: impl IntoIterator<Item = DPoly>) -> DPoly {
        let mut it = factors.into_iter();
        let Some(first) = it.next() else { return Self::bullet_one() };
        it.fold(first, |acc, f| Self::bullet(&acc, &f))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), Kind::Sum(ts) if ts.is_empty())
    }

    /// Address of the shared node, stable while any clone is alive.
    pub fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &DPoly) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn children(&self) -> Vec<&DPoly> {
        match self.kind() {
            Kind::Var | Kind::BulletOne | Kind::CircOne => vec![],
            Kind::ScalarMul(_, p) => vec![p],
            Kind::Sum(ts) => ts.iter().collect(),
            Kind::BulletProd(a, b) | Kind::CircProd(a, b) => vec![a, b],
        }
    }

    /// Distinct nodes in post-order (children before parents).
    pub fn post_order(&self) -> Vec<DPoly> {
        self.post_order_skipping(|_| false)
    }

    /// Post-order that does not descend into nodes for which `skip` holds.
    pub fn post_order_skipping(&self, skip: impl Fn(usize) -> bool) -> Vec<DPoly> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        // explicit stack: (node, children pushed?)
        let mut stack = vec![(self.clone(), false)];
        while let Some((p, expanded)) = stack.pop() {
            if expanded {
                out.push(p);
                continue;
            }
            if !seen.insert(p.node_id()) || skip(p.node_id()) {
                continue;
            }
            stack.push((p.clone(), true));
            for c in p.children().into_iter().rev() {
                if !seen.contains(&c.node_id()) {
                    stack.push((c.clone(), false));
                }
            }
        }
        out
    }

    /// Number of distinct shared nodes.
    pub fn node_count(&self) -> usize {
        self.post_order().len()
    }

    /// Rebuilds bottom-up, applying `f` to each node after its children
    /// have been rewritten. Shared nodes are rewritten once.
    pub fn rewrite(&self, mut f: impl FnMut(&DPoly, &[DPoly]) -> DPoly) -> DPoly {
        let mut done: HashMap<usize, DPoly> = HashMap::new();
        for node in self.post_order() {
            let kids: Vec<DPoly> = node.children().iter().map(|c| done[&c.node_id()].clone()).collect();
            let new = f(&node, &kids);
            done.insert(node.node_id(), new);
        }
        done.remove(&self.node_id()).expect("root visited")
    }

    /// `rewrite` over several roots with one shared memo, so subterms shared
    /// between roots stay shared in the output.
    pub fn rewrite_all(roots: &[DPoly], mut f: impl FnMut(&DPoly, &[DPoly]) -> DPoly) -> Vec<DPoly> {
        let mut done: HashMap<usize, (DPoly, DPoly)> = HashMap::new();
        for r in roots {
            for node in r.post_order_skipping(|id| done.contains_key(&id)) {
                let kids: Vec<DPoly> = node.children().iter().map(|c| done[&c.node_id()].1.clone()).collect();
                let new = f(&node, &kids);
                done.insert(node.node_id(), (node, new));
            }
        }
        roots.iter().map(|r| done[&r.node_id()].1.clone()).collect()
    }

    /// `σ_x` applied to many polynomials at once, preserving sharing.
    pub fn involution_all(ps: &[DPoly]) -> Vec<DPoly> {
        Self::rewrite_all(ps, |node, kids| match node.kind() {
            Kind::BulletProd(..) => Self::bullet(&kids[1], &kids[0]),
            Kind::CircProd(..) => Self::circ(&kids[1], &kids[0]),
            _ => node.with_children(kids),
        })
    }

    /// Same node kind as `self` with new children.
    pub fn with_children(&self, kids: &[DPoly]) -> DPoly {
        match self.kind() {
            Kind::Var | Kind::BulletOne | Kind::CircOne => self.clone(),
            Kind::ScalarMul(c, _) => Self::scale(c.clone(), &kids[0]),
            Kind::Sum(_) => Self::sum(kids.iter().cloned()),
            Kind::BulletProd(..) => Self::bullet(&kids[0], &kids[1]),
            Kind::CircProd(..) => Self::circ(&kids[0], &kids[1]),
        }
    }

    /// `f ∗ g`: substitutes `g` for `x`.
    pub fn compose(&self, g: &DPoly) -> DPoly {
        self.rewrite(|node, kids| match node.kind() {
            Kind::Var => g.clone(),
            _ => node.with_children(kids),
        })
    }

    /// The standard involution `σ_x`: fixes `x`, `I`, `J` and reverses both products.
    pub fn involution(&self) -> DPoly {
        self.rewrite(|node, kids| match node.kind() {
            Kind::BulletProd(..) => Self::bullet(&kids[1], &kids[0]),
            Kind::CircProd(..) => Self::circ(&kids[1], &kids[0]),
            _ => node.with_children(kids),
        })
    }

    fn structurally_equal(&self, other: &DPoly, proven: &mut HashSet<(usize, usize)>) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        if proven.contains(&(self.node_id(), other.node_id())) {
            return true;
        }
        let eq = match (self.kind(), other.kind()) {
            (Kind::Var, Kind::Var) | (Kind::BulletOne, Kind::BulletOne) | (Kind::CircOne, Kind::CircOne) => true,
            (Kind::ScalarMul(c, p), Kind::ScalarMul(d, q)) => c == d && p.structurally_equal(q, proven),
            (Kind::Sum(a), Kind::Sum(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(s, t)| s.structurally_equal(t, proven))
            }
            (Kind::BulletProd(a1, a2), Kind::BulletProd(b1, b2)) | (Kind::CircProd(a1, a2), Kind::CircProd(b1, b2)) => {
                a1.structurally_equal(b1, proven) && a2.structurally_equal(b2, proven)
            }
            _ => false,
        };
        if eq {
            proven.insert((self.node_id(), other.node_id()));
        }
        eq
    }
}

impl PartialEq for DPoly {
    /// Structural equality of normalized trees; not semantic equality.
    fn eq(&self, other: &Self) -> bool {
        self.structurally_equal(other, &mut HashSet::new())
    }
}

impl Eq for DPoly {}

impl Hash for DPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::grammar::print(self))
    }
}

impl fmt::Debug for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn normalization() {
        let x = DPoly::x();
        assert_eq!(DPoly::scale(q(1), &x), x);
        assert!(DPoly::scale(q(0), &x).is_zero());
        assert_eq!(DPoly::scale(q(2), &DPoly::scale(q(3), &x)), DPoly::scale(q(6), &x));
        let s = DPoly::sum([x.clone(), DPoly::sum([DPoly::bullet_one(), DPoly::circ_one()])]);
        match s.kind() {
            Kind::Sum(ts) => assert_eq!(ts.len(), 3),
            _ => panic!("expected a sum"),
        }
        assert_eq!(DPoly::sum([x.clone()]), x);
        assert_eq!(DPoly::sum([x.clone(), DPoly::zero()]), x);
    }

    #[test]
    fn structural_equality_is_not_semantic() {
        let x = DPoly::x();
        let a = DPoly::circ(&x, &x);
        assert_ne!(a, x);
        assert_eq!(a, DPoly::circ(&DPoly::x(), &DPoly::x()));
        assert_ne!(DPoly::bullet(&x, &DPoly::circ_one()), DPoly::bullet(&DPoly::circ_one(), &x));
    }

    #[test]
    fn compose_identities() {
        let x = DPoly::x();
        let g = DPoly::bullet(&x, &x).sub(&DPoly::circ_one());
        let f = DPoly::circ(&x, &DPoly::bullet_one()).add(&x);
        assert_eq!(x.compose(&g), g);
        assert_eq!(f.compose(&x), f);
    }

    #[test]
    fn involution_reverses_products() {
        let x = DPoly::x();
        let a = DPoly::bullet(&x, &DPoly::circ_one());
        assert_eq!(a.involution(), DPoly::bullet(&DPoly::circ_one(), &x));
        assert_eq!(x.involution(), x);
        assert_eq!(a.involution().involution(), a);
    }

    #[test]
    fn shared_dag_stays_small() {
        let mut p = DPoly::x();
        for _ in 0..60 {
            p = DPoly::bullet(&p, &p);
        }
        assert_eq!(p.node_count(), 61);
        assert_eq!(p.compose(&DPoly::x()).node_count(), 61);
        assert_eq!(p.involution(), p.involution());
    }
}
