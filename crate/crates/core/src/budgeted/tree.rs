use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{NodeWeightedInstance, VertexId};
use crate::rational::Rational;

/// A tree given by parent links, carrying the cost and prize of each of its
/// vertices so that tree surgery needs no graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub root: VertexId,
    pub parent: BTreeMap<VertexId, VertexId>,
    pub vertex_cost: BTreeMap<VertexId, Rational>,
    pub vertex_prize: BTreeMap<VertexId, Rational>,
    pub cost: Rational,
    pub prize: Rational,
}

/// `prize / cost >= gamma`, with an empty cost counting as an infinite ratio.
pub fn ratio_at_least(prize: &Rational, cost: &Rational, gamma: &Rational) -> bool {
    prize >= &(gamma * cost)
}

impl RootedTree {
    /// Checks the parent links (every vertex reaches `root`, no cycles) and
    /// totals the weights.
    pub fn new(
        root: VertexId,
        parent: BTreeMap<VertexId, VertexId>,
        vertex_cost: BTreeMap<VertexId, Rational>,
        vertex_prize: BTreeMap<VertexId, Rational>,
    ) -> Result<Self> {
        if parent.contains_key(&root) {
            return Err(Error::InvalidInstance("the root has a parent".into()));
        }
        let vertices: BTreeSet<VertexId> = parent.keys().copied().chain([root]).collect();
        if vertex_cost.keys().copied().collect::<BTreeSet<_>>() != vertices
            || vertex_prize.keys().copied().collect::<BTreeSet<_>>() != vertices
        {
            return Err(Error::InvalidInstance("weights must cover exactly the tree vertices".into()));
        }
        for &v in parent.keys() {
            let mut cur = v;
            let mut steps = 0;
            while cur != root {
                cur = *parent
                    .get(&cur)
                    .ok_or_else(|| Error::InvalidInstance(format!("vertex {cur} has no path to the root")))?;
                steps += 1;
                if steps > vertices.len() {
                    return Err(Error::InvalidInstance("parent links contain a cycle".into()));
                }
            }
        }
        let cost = vertex_cost.values().fold(Rational::zero(), |a, c| a + c);
        let prize = vertex_prize.values().fold(Rational::zero(), |a, p| a + p);
        Ok(Self { root, parent, vertex_cost, vertex_prize, cost, prize })
    }

    /// BFS tree of `G[vertices]` from `root`, weights taken from `instance`.
    pub fn spanning(instance: &NodeWeightedInstance, root: VertexId, vertices: &BTreeSet<VertexId>) -> Result<Self> {
        if !vertices.contains(&root) {
            return Err(Error::Precondition("the root must belong to the vertex set".into()));
        }
        let mut parent = BTreeMap::new();
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in instance.neighbors(u) {
                if vertices.contains(&w) && seen.insert(w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != vertices.len() {
            return Err(Error::Precondition("vertex set is not connected".into()));
        }
        Self::with_weights(instance, root, parent)
    }

    /// Tree with the given links, weights taken from `instance`.
    pub fn with_weights(instance: &NodeWeightedInstance, root: VertexId, parent: BTreeMap<VertexId, VertexId>) -> Result<Self> {
        let vertices: Vec<VertexId> = parent.keys().copied().chain([root]).collect();
        let vertex_cost = vertices.iter().map(|&v| (v, instance.cost(v).clone())).collect();
        let vertex_prize = vertices.iter().map(|&v| (v, instance.prize(v).clone())).collect();
        Self::new(root, parent, vertex_cost, vertex_prize)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.vertex_cost.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.vertex_cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_cost.is_empty()
    }

    pub fn ratio(&self) -> Option<Rational> {
        (!self.cost.is_zero()).then(|| &self.prize / &self.cost)
    }

    pub fn children(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut children: BTreeMap<VertexId, Vec<VertexId>> = self.vertex_cost.keys().map(|&v| (v, Vec::new())).collect();
        for (&v, &p) in &self.parent {
            children.get_mut(&p).expect("parent is a tree vertex").push(v);
        }
        children
    }

    /// Vertices in depth-first preorder, children by ascending id.
    pub fn preorder(&self) -> Vec<VertexId> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(children[&v].iter().rev());
        }
        order
    }

    /// The subtree rooted at `v`: every vertex whose root path passes through `v`.
    pub fn subtree(&self, v: VertexId) -> BTreeSet<VertexId> {
        let children = self.children();
        let mut out = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.insert(u);
            stack.extend(&children[&u]);
        }
        out
    }

    pub fn cost_of<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Rational {
        set.into_iter().fold(Rational::zero(), |a, v| a + &self.vertex_cost[v])
    }

    pub fn prize_of<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Rational {
        set.into_iter().fold(Rational::zero(), |a, v| a + &self.vertex_prize[v])
    }

    /// The tree restricted to a set closed under taking parents below `root`.
    pub fn restrict(&self, root: VertexId, keep: &BTreeSet<VertexId>) -> Result<Self> {
        let parent = self.parent.iter().filter(|(v, p)| keep.contains(v) && keep.contains(p) && **v != root).map(|(&v, &p)| (v, p)).collect();
        let vertex_cost = keep.iter().map(|&v| (v, self.vertex_cost[&v].clone())).collect();
        let vertex_prize = keep.iter().map(|&v| (v, self.vertex_prize[&v].clone())).collect();
        Self::new(root, parent, vertex_cost, vertex_prize)
    }

    /// Re-roots the same tree at `root`.
    pub fn rerooted(&self, root: VertexId) -> Result<Self> {
        let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (&v, &p) in &self.parent {
            adjacency.entry(v).or_default().push(p);
            adjacency.entry(p).or_default().push(v);
        }
        let mut parent = BTreeMap::new();
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in adjacency.get(&u).into_iter().flatten() {
                if seen.insert(w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        Self::new(root, parent, self.vertex_cost.clone(), self.vertex_prize.clone())
    }

    /// Undirected tree edges.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.parent.iter().map(|(&v, &p)| (p, v)).collect()
    }

    /// Same vertex structure with ids translated through `map`.
    pub fn relabeled(&self, map: &[VertexId]) -> Self {
        Self {
            root: map[self.root],
            parent: self.parent.iter().map(|(&v, &p)| (map[v], map[p])).collect(),
            vertex_cost: self.vertex_cost.iter().map(|(&v, c)| (map[v], c.clone())).collect(),
            vertex_prize: self.vertex_prize.iter().map(|(&v, p)| (map[v], p.clone())).collect(),
            cost: self.cost.clone(),
            prize: self.prize.clone(),
        }
    }

    /// Replaces the stored vertex weights with those of `instance`.
    pub fn reweighted(&self, instance: &NodeWeightedInstance) -> Self {
        Self::with_weights(instance, self.root, self.parent.clone()).expect("links already validated")
    }
}
