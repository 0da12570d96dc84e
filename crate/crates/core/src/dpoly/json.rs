//! JSON form of a double polynomial: the node list of its DAG in post-order,
//! children referenced by index.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ast::{DPoly, Kind};
use crate::error::{Error, Result};
use crate::exactcore::Rational;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeJson {
    X,
    #[serde(rename = "I")]
    BulletOne,
    #[serde(rename = "J")]
    CircOne,
    Scale { c: Rational, arg: usize },
    Sum { args: Vec<usize> },
    Bullet { args: [usize; 2] },
    Circ { args: [usize; 2] },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DPolyJson {
    pub nodes: Vec<NodeJson>,
    pub root: usize,
}

pub fn to_json(p: &DPoly) -> DPolyJson {
    let order = p.post_order();
    let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, q)| (q.node_id(), i)).collect();
    let ix = |q: &DPoly| index[&q.node_id()];
    let nodes = order
        .iter()
        .map(|q| match q.kind() {
            Kind::Var => NodeJson::X,
            Kind::BulletOne => NodeJson::BulletOne,
            Kind::CircOne => NodeJson::CircOne,
            Kind::ScalarMul(c, a) => NodeJson::Scale { c: c.clone(), arg: ix(a) },
            Kind::Sum(ts) => NodeJson::Sum { args: ts.iter().map(ix).collect() },
            Kind::BulletProd(a, b) => NodeJson::Bullet { args: [ix(a), ix(b)] },
            Kind::CircProd(a, b) => NodeJson::Circ { args: [ix(a), ix(b)] },
        })
        .collect();
    DPolyJson { nodes, root: ix(p) }
}

pub fn from_json(j: &DPolyJson) -> Result<DPoly> {
    let mut built: Vec<DPoly> = Vec::with_capacity(j.nodes.len());
    for (i, node) in j.nodes.iter().enumerate() {
        let get = |k: usize| {
            built.get(k).cloned().ok_or_else(|| Error::Json(format!("node {i} references later node {k}")))
        };
        let p = match node {
            NodeJson::X => DPoly::x(),
            NodeJson::BulletOne => DPoly::bullet_one(),
            NodeJson::CircOne => DPoly::circ_one(),
            NodeJson::Scale { c, arg } => DPoly::scale(c.clone(), &get(*arg)?),
            NodeJson::Sum { args } => DPoly::sum(args.iter().map(|&k| get(k)).collect::<Result<Vec<_>>>()?),
            NodeJson::Bullet { args } => DPoly::bullet(&get(args[0])?, &get(args[1])?),
            NodeJson::Circ { args } => DPoly::circ(&get(args[0])?, &get(args[1])?),
        };
        built.push(p);
    }
    built.get(j.root).cloned().ok_or_else(|| Error::Json(format!("root {} out of range", j.root)))
}

impl Serialize for DPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DPolyJson::deserialize(d)?;
        from_json(&j).map_err(serde::de::Error::custom)
    }
}
