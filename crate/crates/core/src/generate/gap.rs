use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{subdivide_edge_costs, EdgeWeightedInstance, NodeWeightedInstance, VertexId};
use crate::rational::{int, Rational};

/// A path of `B - 1` unit edges from the root into the center of a star with
/// `k` unit-prize leaves, plus a fractional flow solution of the path LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapInstance {
    pub budget: u64,
    pub k: u64,
    pub edge_weighted: EdgeWeightedInstance,
    pub node_weighted: NodeWeightedInstance,
    /// Root-to-leaf vertex paths, one per leaf.
    pub paths: Vec<Vec<VertexId>>,
    /// Flow on each path.
    pub flow: Vec<Rational>,
    /// Capacity bought on each edge, indexed like `edge_weighted.edges`.
    pub capacity: Vec<Rational>,
    pub fractional_value: Rational,
}

impl GapInstance {
    pub fn leaves(&self) -> std::ops::Range<VertexId> {
        self.budget as usize..self.budget as usize + self.k as usize
    }
}

pub fn gen_gap_instance(budget: u64, k: u64) -> Result<GapInstance> {
    if budget == 0 || k == 0 {
        return Err(Error::Precondition("the gap family needs B >= 1 and k >= 1".into()));
    }
    let b = budget as usize;
    let mut vertices: Vec<(String, Rational)> = vec![("r".to_string(), Rational::zero())];
    vertices.extend((1..b).map(|i| (format!("p{i}"), Rational::zero())));
    vertices.extend((1..=k).map(|i| (format!("u{i}"), int(1))));
    let mut edges: Vec<(VertexId, VertexId, Rational)> = (1..b).map(|i| (i - 1, i, int(1))).collect();
    let center = b - 1;
    edges.extend((0..k as usize).map(|i| (center, b + i, int(1))));
    let share = Rational::new((budget as i64).into(), ((budget + k - 1) as i64).into());
    let spine: Vec<VertexId> = (0..b).collect();
    let paths: Vec<Vec<VertexId>> = (0..k as usize).map(|i| spine.iter().copied().chain([b + i]).collect()).collect();
    let edge_weighted = EdgeWeightedInstance {
        vertices,
        edges,
        demands: Vec::new(),
        root: Some(0),
        budget: Some(int(budget as i64)),
    };
    let node_weighted = subdivide_edge_costs(&edge_weighted)?;
    Ok(GapInstance {
        budget,
        k,
        node_weighted,
        flow: vec![share.clone(); k as usize],
        capacity: vec![share.clone(); edge_weighted.edges.len()],
        fractional_value: share * int(k as i64),
        paths,
        edge_weighted,
    })
}

/// Checks the stored flow against the path LP directly: per edge and target
/// vertex the flow through the edge stays within the edge capacity, each
/// vertex receives at most one unit, capacities sum to at most the budget, and
/// the prize-weighted flow equals the stored value.
pub fn verify_flow_solution(gap: &GapInstance) -> bool {
    let g = &gap.edge_weighted;
    if gap.paths.len() != gap.flow.len() || gap.capacity.len() != g.edges.len() {
        return false;
    }
    if gap.flow.iter().chain(&gap.capacity).any(|x| x.is_negative()) {
        return false;
    }
    let edge_index = |u: VertexId, v: VertexId| g.edges.iter().position(|(a, b, _)| (*a, *b) == (u, v) || (*a, *b) == (v, u));
    let mut path_edges: Vec<BTreeSet<usize>> = Vec::new();
    for p in &gap.paths {
        if p.first() != g.root.as_ref() {
            return false;
        }
        let mut es = BTreeSet::new();
        for w in p.windows(2) {
            match edge_index(w[0], w[1]) {
                Some(e) => {
                    es.insert(e);
                }
                None => return false,
            }
        }
        path_edges.push(es);
    }
    let targets: BTreeSet<VertexId> = gap.paths.iter().filter_map(|p| p.last().copied()).collect();
    for &v in &targets {
        let into_v: Vec<usize> = (0..gap.paths.len()).filter(|&i| gap.paths[i].last() == Some(&v)).collect();
        let total = into_v.iter().fold(Rational::zero(), |a, &i| a + &gap.flow[i]);
        if total > int(1) {
            return false;
        }
        for (e, cap) in gap.capacity.iter().enumerate() {
            let through = into_v.iter().filter(|&&i| path_edges[i].contains(&e)).fold(Rational::zero(), |a, &i| a + &gap.flow[i]);
            if &through > cap {
                return false;
            }
        }
    }
    let spent = gap.capacity.iter().fold(Rational::zero(), |a, x| a + x);
    if spent > int(gap.budget as i64) {
        return false;
    }
    let value = gap
        .paths
        .iter()
        .zip(&gap.flow)
        .fold(Rational::zero(), |a, (p, f)| a + g.prize(*p.last().expect("paths are nonempty")) * f);
    value == gap.fractional_value
}
