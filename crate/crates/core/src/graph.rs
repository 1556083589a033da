//! Node-weighted undirected graphs, cost overrides and node-weighted
//! shortest paths.
//!
//! Path length always counts the cost of *both* endpoints: a single vertex
//! `v` is a path of length `c(v)`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{is_nonnegative, Distance, Rational};

pub type VertexId = usize;
pub type DemandId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub cost: Rational,
    pub prize: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    pub s: VertexId,
    pub t: VertexId,
    pub penalty: Rational,
}

/// A graph with per-vertex cost and prize, demand pairs with penalties and an
/// optional root and budget. Immutable once built; every mutation returns a
/// fresh, re-validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeWeightedInstance {
    vertices: Vec<Vertex>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
    demands: Vec<Demand>,
    root: Option<VertexId>,
    budget: Option<Rational>,
    by_name: BTreeMap<String, VertexId>,
}

impl NodeWeightedInstance {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
        demands: Vec<Demand>,
        root: Option<VertexId>,
        budget: Option<Rational>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut by_name = BTreeMap::new();
        for (id, v) in vertices.iter().enumerate() {
            if by_name.insert(v.name.clone(), id).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate vertex id `{}`", v.name)));
            }
            if !is_nonnegative(&v.cost) || !is_nonnegative(&v.prize) {
                return Err(Error::InvalidInstance(format!("vertex `{}` has a negative cost or prize", v.name)));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) references a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop on `{}`", vertices[u].name)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!(
                    "parallel edge between `{}` and `{}`",
                    vertices[u].name, vertices[v].name
                )));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        for d in &demands {
            if d.s >= n || d.t >= n {
                return Err(Error::InvalidInstance("demand references a missing vertex".into()));
            }
            if !is_nonnegative(&d.penalty) {
                return Err(Error::InvalidInstance("negative demand penalty".into()));
            }
        }
        if let Some(r) = root {
            if r >= n {
                return Err(Error::InvalidInstance("root references a missing vertex".into()));
            }
        }
        if let Some(b) = &budget {
            if !is_nonnegative(b) {
                return Err(Error::InvalidInstance("negative budget".into()));
            }
        }
        Ok(Self { vertices, edges, adjacency, demands, root, budget, by_name })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn cost(&self, v: VertexId) -> &Rational {
        &self.vertices[v].cost
    }

    pub fn prize(&self, v: VertexId) -> &Rational {
        &self.vertices[v].prize
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v].name
    }

    pub fn id_of(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    pub fn budget(&self) -> Option<&Rational> {
        self.budget.as_ref()
    }

    /// Sorted, deduplicated demand endpoints.
    pub fn terminals(&self) -> Vec<VertexId> {
        let set: BTreeSet<_> = self.demands.iter().flat_map(|d| [d.s, d.t]).collect();
        set.into_iter().collect()
    }

    pub fn set_cost<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Rational {
        set.into_iter().fold(Rational::zero(), |acc, &v| acc + self.cost(v))
    }

    pub fn set_prize<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Rational {
        set.into_iter().fold(Rational::zero(), |acc, &v| acc + self.prize(v))
    }

    pub fn total_cost(&self) -> Rational {
        self.vertices.iter().fold(Rational::zero(), |acc, v| acc + &v.cost)
    }

    pub fn total_prize(&self) -> Rational {
        self.vertices.iter().fold(Rational::zero(), |acc, v| acc + &v.prize)
    }

    /// True when every demand endpoint is a distinct, degree-1, zero-cost vertex.
    pub fn is_normalized(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.demands.iter().flat_map(|d| [d.s, d.t]).all(|t| {
            seen.insert(t) && self.cost(t).is_zero() && self.adjacency[t].len() == 1
        })
    }

    pub fn with_demands(&self, demands: Vec<Demand>) -> Result<Self> {
        Self::new(self.vertices.clone(), self.edges.clone(), demands, self.root, self.budget.clone())
    }

    pub fn with_root(&self, root: Option<VertexId>) -> Result<Self> {
        Self::new(self.vertices.clone(), self.edges.clone(), self.demands.clone(), root, self.budget.clone())
    }

    pub fn with_budget(&self, budget: Option<Rational>) -> Result<Self> {
        Self::new(self.vertices.clone(), self.edges.clone(), self.demands.clone(), self.root, budget)
    }

    /// Replaces vertex costs and/or prizes.
    pub fn with_weights(&self, costs: Option<Vec<Rational>>, prizes: Option<Vec<Rational>>) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        if let Some(costs) = costs {
            for (v, c) in vertices.iter_mut().zip(costs) {
                v.cost = c;
            }
        }
        if let Some(prizes) = prizes {
            for (v, p) in vertices.iter_mut().zip(prizes) {
                v.prize = p;
            }
        }
        Self::new(vertices, self.edges.clone(), self.demands.clone(), self.root, self.budget.clone())
    }

    /// Adds fresh vertices and edges, returning the new instance and the ids
    /// assigned to the added vertices.
    pub fn extended(&self, extra: Vec<Vertex>, extra_edges: Vec<(VertexId, VertexId)>) -> Result<(Self, Vec<VertexId>)> {
        let first = self.len();
        let ids = (first..first + extra.len()).collect();
        let mut vertices = self.vertices.clone();
        vertices.extend(extra);
        let mut edges = self.edges.clone();
        edges.extend(extra_edges);
        Ok((Self::new(vertices, edges, self.demands.clone(), self.root, self.budget.clone())?, ids))
    }

    /// Induced subgraph on `keep`. Demands with a dropped endpoint are dropped;
    /// the root is dropped if not kept. Returns the old id of every new vertex.
    pub fn induced(&self, keep: &[bool]) -> (Self, Vec<VertexId>) {
        let old_ids: Vec<VertexId> = (0..self.len()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let vertices = old_ids.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        let demands = self
            .demands
            .iter()
            .filter(|d| keep[d.s] && keep[d.t])
            .map(|d| Demand { s: new_id[d.s], t: new_id[d.t], penalty: d.penalty.clone() })
            .collect();
        let root = self.root.filter(|&r| keep[r]).map(|r| new_id[r]);
        let sub = Self::new(vertices, edges, demands, root, self.budget.clone())
            .expect("induced subgraph of a valid instance is valid");
        (sub, old_ids)
    }

    /// Connected components of `G[member]`, each sorted, ordered by smallest vertex.
    pub fn components_within(&self, member: &[bool]) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if !member[start] || seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if member[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the vertex set induces a connected subgraph. The empty set counts as connected.
    pub fn is_connected_set(&self, set: &[VertexId]) -> bool {
        if set.is_empty() {
            return true;
        }
        let mut member = vec![false; self.len()];
        for &v in set {
            member[v] = true;
        }
        let comps = self.components_within(&member);
        comps.len() == 1
    }

    pub fn membership<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        for &v in set {
            member[v] = true;
        }
        member
    }
}

/// The instance cost function with some vertices overridden to zero.
#[derive(Debug, Clone)]
pub struct CostFunction<'a> {
    base: &'a NodeWeightedInstance,
    zeroed: Vec<bool>,
}

impl<'a> CostFunction<'a> {
    pub fn base(instance: &'a NodeWeightedInstance) -> Self {
        Self { base: instance, zeroed: vec![false; instance.len()] }
    }

    pub fn zeroing<'b>(instance: &'a NodeWeightedInstance, zeroed: impl IntoIterator<Item = &'b VertexId>) -> Self {
        let mut f = Self::base(instance);
        for &v in zeroed {
            f.zeroed[v] = true;
        }
        f
    }

    pub fn value(&self, v: VertexId) -> Rational {
        if self.zeroed[v] {
            Rational::zero()
        } else {
            self.base.cost(v).clone()
        }
    }

    pub fn is_zero(&self, v: VertexId) -> bool {
        self.zeroed[v] || self.base.cost(v).is_zero()
    }

    pub fn is_zeroed(&self, v: VertexId) -> bool {
        self.zeroed[v]
    }

    pub fn instance(&self) -> &'a NodeWeightedInstance {
        self.base
    }
}

/// Shortest node-weighted distances from a source set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    pub sources: Vec<VertexId>,
    pub dist: Vec<Distance>,
    pub pred: Vec<Option<VertexId>>,
}

impl DistanceMap {
    pub fn get(&self, v: VertexId) -> &Distance {
        &self.dist[v]
    }

    /// Vertices on the recorded shortest path, from `v` back to a source.
    /// Empty when `v` is unreachable.
    pub fn path_to_source(&self, v: VertexId) -> Vec<VertexId> {
        if !self.dist[v].is_finite() {
            return Vec::new();
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path
    }
}

/// Dijkstra over vertex costs. Every source is seeded at its own cost.
pub fn shortest_paths(instance: &NodeWeightedInstance, cost: &CostFunction<'_>, sources: &[VertexId]) -> Result<DistanceMap> {
    if sources.is_empty() {
        return Err(Error::Precondition("shortest paths need at least one source".into()));
    }
    let n = instance.len();
    let mut dist = vec![Distance::Infinite; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        let d = Distance::Finite(cost.value(s));
        if d < dist[s] {
            dist[s] = d;
            heap.push(Reverse((cost.value(s), s)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &w in instance.neighbors(u) {
            if done[w] {
                continue;
            }
            let candidate = &d + cost.value(w);
            let better = match &dist[w] {
                Distance::Finite(old) => candidate < *old,
                Distance::Infinite => true,
            };
            if better {
                dist[w] = Distance::Finite(candidate.clone());
                pred[w] = Some(u);
                heap.push(Reverse((candidate, w)));
            }
        }
    }
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    Ok(DistanceMap { sources, dist, pred })
}

/// Maximal connected sets of zero-cost vertices under `cost`.
pub fn zero_cost_components(instance: &NodeWeightedInstance, cost: &CostFunction<'_>) -> Vec<Vec<VertexId>> {
    let member: Vec<bool> = (0..instance.len()).map(|v| cost.is_zero(v)).collect();
    instance.components_within(&member)
}

/// Attaches a fresh zero-cost leaf to each endpoint of each demand and
/// re-points the demand at the two leaves.
pub fn normalize_demands(instance: &NodeWeightedInstance) -> NodeWeightedInstance {
    if instance.demands().is_empty() {
        return instance.clone();
    }
    let mut extra = Vec::new();
    let mut extra_edges = Vec::new();
    let mut demands = Vec::new();
    let first = instance.len();
    for (i, d) in instance.demands().iter().enumerate() {
        let s_new = first + extra.len();
        extra.push(Vertex {
            name: fresh_name(instance, &format!("{}#s{}", instance.name(d.s), i)),
            cost: Rational::zero(),
            prize: Rational::zero(),
        });
        let t_new = first + extra.len();
        extra.push(Vertex {
            name: fresh_name(instance, &format!("{}#t{}", instance.name(d.t), i)),
            cost: Rational::zero(),
            prize: Rational::zero(),
        });
        extra_edges.push((d.s, s_new));
        extra_edges.push((d.t, t_new));
        demands.push(Demand { s: s_new, t: t_new, penalty: d.penalty.clone() });
    }
    let (extended, _) = instance.extended(extra, extra_edges).expect("fresh leaves keep the instance valid");
    extended.with_demands(demands).expect("re-pointed demands are valid")
}

fn fresh_name(instance: &NodeWeightedInstance, wanted: &str) -> String {
    let mut name = wanted.to_string();
    while instance.id_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// A graph whose costs sit on edges; vertices carry prizes only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeightedInstance {
    pub vertices: Vec<(String, Rational)>,
    pub edges: Vec<(VertexId, VertexId, Rational)>,
    pub demands: Vec<Demand>,
    pub root: Option<VertexId>,
    pub budget: Option<Rational>,
}

impl EdgeWeightedInstance {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn prize(&self, v: VertexId) -> &Rational {
        &self.vertices[v].1
    }
}

/// Replaces every edge `(u, v)` of cost `w` by a path `u - x - v` where the new
/// vertex `x` costs `w` and has no prize. Original vertices cost zero.
pub fn subdivide_edge_costs(instance: &EdgeWeightedInstance) -> Result<NodeWeightedInstance> {
    let mut vertices: Vec<Vertex> = instance
        .vertices
        .iter()
        .map(|(name, prize)| Vertex { name: name.clone(), cost: Rational::zero(), prize: prize.clone() })
        .collect();
    let n = vertices.len();
    let mut edges = Vec::with_capacity(2 * instance.edges.len());
    for (u, v, w) in &instance.edges {
        if *u >= n || *v >= n {
            return Err(Error::InvalidInstance("edge references a missing vertex".into()));
        }
        if !is_nonnegative(w) {
            return Err(Error::InvalidInstance("negative edge cost".into()));
        }
        let x = vertices.len();
        vertices.push(Vertex {
            name: format!("{}~{}", instance.vertices[*u].0, instance.vertices[*v].0),
            cost: w.clone(),
            prize: Rational::zero(),
        });
        edges.push((*u, x));
        edges.push((x, *v));
    }
    NodeWeightedInstance::new(vertices, edges, instance.demands.clone(), instance.root, instance.budget.clone())
}
