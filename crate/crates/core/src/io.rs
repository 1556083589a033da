//! JSON instance schema and DIMACS-style importers.

use std::fs;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::graph::{subdivide_edge_costs, Demand, EdgeWeightedInstance, NodeWeightedInstance, Vertex};
use crate::rational::{parse_rational, serde_rational, serde_rational_opt, Rational};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    vertices: Vec<VertexJson>,
    #[serde(default)]
    edges: Vec<(Id, Id)>,
    #[serde(default)]
    demands: Vec<DemandJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<Id>,
    #[serde(default, with = "serde_rational_opt", skip_serializing_if = "Option::is_none")]
    budget: Option<Rational>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: Id,
    #[serde(default = "Rational::zero", with = "serde_rational")]
    cost: Rational,
    #[serde(default = "Rational::zero", with = "serde_rational")]
    prize: Rational,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DemandJson {
    s: Id,
    t: Id,
    #[serde(with = "serde_rational")]
    penalty: Rational,
}

/// Vertex ids are strings on output; integers are accepted on input.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
struct Id(String);

impl<'de> Deserialize<'de> for Id {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => Ok(Id(s)),
            serde_json::Value::Number(n) => Ok(Id(n.to_string())),
            other => Err(serde::de::Error::custom(format!("vertex id must be a string, found {other}"))),
        }
    }
}

pub fn instance_from_json(text: &str) -> Result<NodeWeightedInstance> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    let vertices: Vec<Vertex> = raw
        .vertices
        .into_iter()
        .map(|v| Vertex { name: v.id.0, cost: v.cost, prize: v.prize })
        .collect();
    let lookup = |id: &Id| {
        vertices
            .iter()
            .position(|v| v.name == id.0)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown vertex id `{}`", id.0)))
    };
    let edges = raw.edges.iter().map(|(u, v)| Ok((lookup(u)?, lookup(v)?))).collect::<Result<Vec<_>>>()?;
    let demands = raw
        .demands
        .iter()
        .map(|d| Ok(Demand { s: lookup(&d.s)?, t: lookup(&d.t)?, penalty: d.penalty.clone() }))
        .collect::<Result<Vec<_>>>()?;
    let root = raw.root.as_ref().map(lookup).transpose()?;
    NodeWeightedInstance::new(vertices, edges, demands, root, raw.budget)
}

pub fn instance_to_json(instance: &NodeWeightedInstance) -> String {
    let id = |v: usize| Id(instance.name(v).to_string());
    let raw = InstanceJson {
        vertices: instance
            .vertices()
            .iter()
            .map(|v| VertexJson { id: Id(v.name.clone()), cost: v.cost.clone(), prize: v.prize.clone() })
            .collect(),
        edges: instance.edges().iter().map(|&(u, v)| (id(u), id(v))).collect(),
        demands: instance
            .demands()
            .iter()
            .map(|d| DemandJson { s: id(d.s), t: id(d.t), penalty: d.penalty.clone() })
            .collect(),
        root: instance.root().map(id),
        budget: instance.budget().cloned(),
    };
    serde_json::to_string_pretty(&raw).expect("instance serializes")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<NodeWeightedInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let is_stp = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("stp"));
    if is_stp {
        parse_stp(&text)
    } else {
        instance_from_json(&text)
    }
}

/// Reads a DIMACS STP file.
///
/// Recognized lines: `Nodes n`, `E u v w`, `T v`, `TP v p` (terminal with
/// prize), `Root v` / `RootP v`, and node weights as `NW w` (positional) or
/// `NW v w`. Any positive edge weight makes the file edge-weighted, in which
/// case edges are subdivided and original vertices keep their node weight.
///
/// Terminals become demands: with a root, every other terminal is paired with
/// the root, with penalty equal to its `TP` prize or, for plain `T`
/// terminals, a penalty exceeding the whole graph cost (so the connection is
/// effectively mandatory). Without a root, plain terminals are all paired
/// with the first terminal.
pub fn parse_stp(text: &str) -> Result<NodeWeightedInstance> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut node_weights: Vec<(Option<usize>, Rational)> = Vec::new();
    let mut terminals: Vec<(usize, Option<Rational>)> = Vec::new();
    let mut root = None;
    let bad = |line: &str| Error::Parse(format!("malformed STP line `{line}`"));
    for line in text.lines() {
        let line = line.trim();
        let mut it = line.split_whitespace();
        let Some(key) = it.next() else { continue };
        let args: Vec<&str> = it.collect();
        let vertex = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| bad(line))?;
            if v == 0 {
                return Err(bad(line));
            }
            Ok(v - 1)
        };
        match key.to_ascii_uppercase().as_str() {
            "NODES" => n = Some(args.first().ok_or_else(|| bad(line))?.parse().map_err(|_| bad(line))?),
            "E" | "A" => {
                if args.len() < 2 {
                    return Err(bad(line));
                }
                let w = match args.get(2) {
                    Some(w) => parse_rational(w)?,
                    None => Rational::zero(),
                };
                edges.push((vertex(args[0])?, vertex(args[1])?, w));
            }
            "T" => terminals.push((vertex(args.first().ok_or_else(|| bad(line))?)?, None)),
            "TP" => {
                if args.len() != 2 {
                    return Err(bad(line));
                }
                terminals.push((vertex(args[0])?, Some(parse_rational(args[1])?)));
            }
            "ROOT" | "ROOTP" => root = Some(vertex(args.first().ok_or_else(|| bad(line))?)?),
            "NW" => match args.as_slice() {
                [w] => node_weights.push((None, parse_rational(w)?)),
                [v, w] => node_weights.push((Some(vertex(v)?), parse_rational(w)?)),
                _ => return Err(bad(line)),
            },
            _ => {}
        }
    }
    let n = n.ok_or_else(|| Error::Parse("STP file lacks a `Nodes` line".into()))?;
    let mut costs = vec![Rational::zero(); n];
    for (i, (v, w)) in node_weights.into_iter().enumerate() {
        let v = v.unwrap_or(i);
        if v >= n {
            return Err(Error::Parse("node weight for a missing vertex".into()));
        }
        costs[v] = w;
    }
    let mut prizes = vec![Rational::zero(); n];
    for (t, p) in &terminals {
        if *t >= n {
            return Err(Error::Parse("terminal is not a vertex".into()));
        }
        if let Some(p) = p {
            prizes[*t] = p.clone();
        }
    }
    let edge_total = edges.iter().fold(Rational::zero(), |acc, e| acc + &e.2);
    let mandatory = costs.iter().fold(edge_total.clone(), |acc, c| acc + c) + Rational::one();
    let mut demands = Vec::new();
    let hub = root.or_else(|| terminals.iter().find(|(_, p)| p.is_none()).map(|(t, _)| *t));
    if let Some(hub) = hub {
        for (t, p) in &terminals {
            if *t == hub || (root.is_none() && p.is_some()) {
                continue;
            }
            let penalty = p.clone().unwrap_or_else(|| mandatory.clone());
            demands.push(Demand { s: hub, t: *t, penalty });
        }
    }
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let weighted = !edge_total.is_zero();
    if weighted {
        let ew = EdgeWeightedInstance {
            vertices: names.into_iter().zip(prizes).collect(),
            edges,
            demands,
            root,
            budget: None,
        };
        let g = subdivide_edge_costs(&ew)?;
        let mut all_costs: Vec<Rational> = (0..g.len()).map(|v| g.cost(v).clone()).collect();
        all_costs[..n].clone_from_slice(&costs);
        g.with_weights(Some(all_costs), None)
    } else {
        let vertices = names
            .into_iter()
            .zip(costs.into_iter().zip(prizes))
            .map(|(name, (cost, prize))| Vertex { name, cost, prize })
            .collect();
        let plain = edges.into_iter().map(|(u, v, _)| (u, v)).collect();
        NodeWeightedInstance::new(vertices, plain, demands, root, None)
    }
}
