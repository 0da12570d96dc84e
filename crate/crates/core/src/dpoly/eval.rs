use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::ast::{DPoly, Kind};
use crate::exactcore::{Field, Matrix, Rational};

/// Evaluates double polynomials at one fixed matrix.
///
/// Results are memoized per shared node, so evaluating many polynomials that
/// share subterms (as the pipeline's do) costs each subterm once.
pub struct Evaluator<'a> {
    a: &'a Matrix,
    memo: HashMap<usize, (DPoly, Arc<Matrix>)>,
}

impl<'a> Evaluator<'a> {
    pub fn new(a: &'a Matrix) -> Self {
        Evaluator { a, memo: HashMap::new() }
    }

    pub fn matrix(&self) -> &Matrix {
        self.a
    }

    pub fn eval(&mut self, p: &DPoly) -> Arc<Matrix> {
        if let Some((_, m)) = self.memo.get(&p.node_id()) {
            return m.clone();
        }
        // children first, without recursion, so deep chains are safe
        let memo = &self.memo;
        let todo = p.post_order_skipping(|id| memo.contains_key(&id));
        for node in todo {
            if self.memo.contains_key(&node.node_id()) {
                continue;
            }
            let value = Arc::new(self.eval_node(&node));
            self.memo.insert(node.node_id(), (node, value));
        }
        self.memo[&p.node_id()].1.clone()
    }

    fn get(&self, p: &DPoly) -> &Matrix {
        &self.memo[&p.node_id()].1
    }

    fn eval_node(&mut self, p: &DPoly) -> Matrix {
        let n = self.a.n();
        match p.kind() {
            Kind::Var => self.a.clone(),
            Kind::BulletOne => Matrix::identity(n),
            Kind::CircOne => Matrix::ones(n),
            Kind::ScalarMul(c, q) => self.get(q).scale(c),
            Kind::Sum(ts) => {
                let mut acc = Matrix::zero(n);
                for t in ts {
                    acc = acc.add(self.get(t)).expect("same dimension");
                }
                acc
            }
            Kind::BulletProd(a, b) => self.get(a).mat_mul(self.get(b)).expect("same dimension"),
            Kind::CircProd(a, b) => {
                if let Some((cap, y)) = falling_product(p) {
                    let m = self.eval(&y);
                    return falling_product_value(&m, cap);
                }
                self.get(a).hadamard(self.get(b)).expect("same dimension")
            }
        }
    }
}

pub fn eval(p: &DPoly, a: &Matrix) -> Matrix {
    let m = Evaluator::new(a).eval(p);
    Arc::try_unwrap(m).unwrap_or_else(|m| (*m).clone())
}

fn factor_shape(f: &DPoly) -> Option<(u64, DPoly)> {
    let Kind::Sum(ts) = f.kind() else { return None };
    let [lead, tail] = ts.as_slice() else { return None };
    let i = match lead.kind() {
        Kind::CircOne => 1,
        Kind::ScalarMul(c, j) if matches!(j.kind(), Kind::CircOne) => c.to_i64().filter(|&v| v > 0)? as u64,
        _ => return None,
    };
    match tail.kind() {
        Kind::ScalarMul(c, y) if *c == -Rational::one() => Some((i, y.clone())),
        _ => None,
    }
}

/// Recognizes `∘∏_{i=1}^{N} (i·J − y)` written as a left-nested ∘-chain and
/// returns `(N, y)`.
fn falling_product(p: &DPoly) -> Option<(u64, DPoly)> {
    let mut factors = Vec::new();
    let mut cur = p.clone();
    loop {
        match cur.kind() {
            Kind::CircProd(a, b) => {
                factors.push(factor_shape(b)?);
                let next = a.clone();
                cur = next;
            }
            _ => {
                factors.push(factor_shape(&cur)?);
                break;
            }
        }
    }
    let y = factors[0].1.clone();
    let mut seen = vec![false; factors.len() + 1];
    for (i, f) in &factors {
        let i = *i as usize;
        if i >= seen.len() || seen[i] || !(f.ptr_eq(&y) || *f == y) {
            return None;
        }
        seen[i] = true;
    }
    Some((factors.len() as u64, y))
}

/// Entry-wise `∏_{i=1}^{N} (i − m)`, using `N!·[m = 0]` when `m` is an
/// integer in `[0, N]`.
fn falling_product_value(m: &Matrix, cap: u64) -> Matrix {
    let factorial = Rational::from_bigint((1..=cap).fold(BigInt::from(1), |acc, i| acc * i));
    let cap_q = Rational::from_integer(cap as i64);
    m.map(|v| {
        if v.is_integer() && !v.is_negative() && *v <= cap_q {
            if v.is_zero() {
                factorial.clone()
            } else {
                Rational::zero()
            }
        } else {
            (1..=cap).fold(Rational::one(), |acc, i| &acc * &(&Rational::from_integer(i as i64) - v))
        }
    })
}
