//! Canonical connected-subset enumeration over vertex bitmasks.
//!
//! Every connected vertex set is generated exactly once by growing from its
//! smallest vertex (or from the root) and only ever extending through the
//! exclusive neighbourhood of the newest vertex.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{NodeWeightedInstance, VertexId};

pub type Mask = u64;

pub const MAX_MASK_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Extend,
    /// Skip every superset reachable from this set.
    Prune,
}

pub fn bit(v: VertexId) -> Mask {
    1 << v
}

pub fn members(mask: Mask) -> impl Iterator<Item = VertexId> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub fn to_vec(mask: Mask) -> Vec<VertexId> {
    members(mask).collect()
}

pub fn adjacency_masks(instance: &NodeWeightedInstance) -> Result<Vec<Mask>> {
    if instance.len() > MAX_MASK_VERTICES {
        return Err(Error::OracleLimit(format!("{} vertices exceed the {MAX_MASK_VERTICES}-vertex enumeration width", instance.len())));
    }
    Ok((0..instance.len())
        .map(|v| instance.neighbors(v).iter().fold(0, |m, &w| m | bit(w)))
        .collect())
}

/// Vertices of `within` reachable from `start` inside `within`.
pub fn flood(adj: &[Mask], start: Mask, within: Mask) -> Mask {
    let mut reached = start & within;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0;
        for v in members(frontier) {
            next |= adj[v];
        }
        frontier = next & within & !reached;
        reached |= frontier;
    }
    reached
}

pub fn is_connected(adj: &[Mask], set: Mask) -> bool {
    if set == 0 {
        return true;
    }
    flood(adj, set & set.wrapping_neg(), set) == set
}

pub struct Enumerator<'a> {
    adj: &'a [Mask],
    allowed: Mask,
    deadline: Option<Instant>,
    visited: u64,
}

impl<'a> Enumerator<'a> {
    pub fn new(adj: &'a [Mask], allowed: Mask, deadline: Option<Instant>) -> Self {
        Self { adj, allowed, deadline, visited: 0 }
    }

    /// Connected sets containing `root` (all other members from `allowed`).
    pub fn rooted(&mut self, root: VertexId, visit: &mut impl FnMut(Mask) -> Visit) -> Result<()> {
        let start = bit(root);
        let ext = self.adj[root] & self.allowed & !start;
        self.grow(start, ext, start | self.adj[root], self.allowed & !start, visit)
    }

    /// Every nonempty connected subset of `allowed`.
    pub fn all(&mut self, visit: &mut impl FnMut(Mask) -> Visit) -> Result<()> {
        for v in members(self.allowed) {
            // only vertices above v may join a set whose minimum is v
            let above = self.allowed & !((bit(v) << 1) - 1);
            let start = bit(v);
            self.grow(start, self.adj[v] & above, start | self.adj[v], above, visit)?;
        }
        Ok(())
    }

    fn grow(&mut self, set: Mask, ext: Mask, closed: Mask, pool: Mask, visit: &mut impl FnMut(Mask) -> Visit) -> Result<()> {
        self.visited += 1;
        if self.visited.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(Error::OracleLimit("oracle time limit exceeded".into()));
                }
            }
        }
        if visit(set) == Visit::Prune {
            return Ok(());
        }
        let mut ext = ext;
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let fresh = self.adj[w] & pool & !closed;
            self.grow(set | bit(w), ext | fresh, closed | self.adj[w], pool, visit)?;
        }
        Ok(())
    }
}
