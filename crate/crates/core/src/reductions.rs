//! Cost-preserving transformations among the quota, k-MST and k-Steiner tree
//! problems, with lift-back of solutions.
//!
//! Zero-cost pendant vertices are never added explicitly. A vertex standing
//! for itself plus `m - 1` pendants simply counts `m` times, which is what both
//! the covering oracle and the lift-back understand. [`ReductionMap::materialize`]
//! builds the explicit graph for cross-checks on tiny inputs.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeWeightedInstance, Vertex, VertexId};
use crate::oracle::CoverProblem;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    KSteinerToKMst,
    RootedToUnrootedKMst,
    QuotaToKSteiner,
    KSteinerFromQuota,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub kind: ReductionKind,
    /// The graph of the transformed problem; its first vertices are the source vertices.
    pub transformed: NodeWeightedInstance,
    pub k_prime: u64,
    /// The problem to solve on `transformed`, with its per-vertex counts.
    pub problem: CoverProblem,
    source_len: usize,
}

impl ReductionMap {
    /// Maps a feasible transformed solution to a source solution of equal
    /// cost: pendant vertices are dropped, every source vertex is kept.
    pub fn lift(&self, solution: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = solution.iter().copied().filter(|&v| v < self.source_len).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// The transformed problem with every counted pendant vertex made explicit.
    pub fn materialize(&self) -> Result<(NodeWeightedInstance, CoverProblem)> {
        let g = &self.transformed;
        let (counts, pendant_counts_as): (Vec<u64>, bool) = match &self.problem {
            CoverProblem::KMst { multiplicity, .. } => (multiplicity.clone().unwrap_or_else(|| vec![1; g.len()]), true),
            CoverProblem::KSteiner { terminals, .. } => (terminals.clone(), false),
            CoverProblem::Quota { .. } => return Ok((g.clone(), self.problem.clone())),
        };
        let mut extra = Vec::new();
        let mut edges = Vec::new();
        for v in 0..g.len() {
            // k-MST counts the vertex itself once; k-Steiner terminals are all pendants
            let pendants = if pendant_counts_as { counts[v].saturating_sub(1) } else { counts[v] };
            for j in 0..pendants {
                edges.push((v, g.len() + extra.len()));
                extra.push(Vertex { name: format!("{}^{j}", g.name(v)), cost: Rational::zero(), prize: Rational::zero() });
            }
        }
        let added = extra.len();
        let (explicit, _) = g.extended(extra, edges)?;
        let root = self.problem.root();
        let problem = match &self.problem {
            CoverProblem::KMst { k, .. } => CoverProblem::KMst { k: *k, root, multiplicity: None },
            CoverProblem::KSteiner { k, .. } => {
                let mut terminals = vec![0; g.len()];
                terminals.extend(std::iter::repeat_n(1, added));
                CoverProblem::KSteiner { k: *k, terminals, root }
            }
            CoverProblem::Quota { .. } => unreachable!(),
        };
        Ok((explicit, problem))
    }
}

fn count(n: usize) -> u64 {
    n as u64
}

/// k-Steiner tree to unrooted k-MST: every terminal carries `n` free pendants,
/// `k' = kn + k`.
pub fn ksteiner_to_kmst(instance: &NodeWeightedInstance, terminals: &[VertexId], k: u64) -> Result<ReductionMap> {
    let n = instance.len();
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        if t >= n {
            return Err(Error::InvalidInstance(format!("terminal {t} does not exist")));
        }
        is_terminal[t] = true;
    }
    if k > count(is_terminal.iter().filter(|&&t| t).count()) {
        return Err(Error::Precondition(format!("k = {k} exceeds the number of terminals")));
    }
    let multiplicity = is_terminal.iter().map(|&t| if t { count(n) + 1 } else { 1 }).collect();
    let k_prime = k * count(n) + k;
    Ok(ReductionMap {
        kind: ReductionKind::KSteinerToKMst,
        transformed: instance.clone(),
        k_prime,
        problem: CoverProblem::KMst { k: k_prime, root: None, multiplicity: Some(multiplicity) },
        source_len: n,
    })
}

/// Rooted k-MST to unrooted k-MST: the root carries `n` free pendants, `k' = k + n`.
pub fn rooted_to_unrooted_kmst(instance: &NodeWeightedInstance, root: VertexId, k: u64) -> Result<ReductionMap> {
    let n = instance.len();
    if root >= n {
        return Err(Error::InvalidInstance(format!("root {root} does not exist")));
    }
    let mut multiplicity = vec![1; n];
    multiplicity[root] = count(n) + 1;
    let k_prime = k + count(n);
    Ok(ReductionMap {
        kind: ReductionKind::RootedToUnrootedKMst,
        transformed: instance.with_root(None)?,
        k_prime,
        problem: CoverProblem::KMst { k: k_prime, root: None, multiplicity: Some(multiplicity) },
        source_len: n,
    })
}

/// Unrooted k-MST by trying every vertex as the root of a rooted solver.
/// Returns the cheapest `(cost, vertex set, root)`, `None` when no root admits a solution.
pub fn unrooted_via_rooted_kmst<F>(instance: &NodeWeightedInstance, k: u64, mut rooted: F) -> Result<Option<(Rational, Vec<VertexId>, VertexId)>>
where
    F: FnMut(&NodeWeightedInstance, VertexId, u64) -> Result<Option<(Rational, Vec<VertexId>)>>,
{
    let mut best: Option<(Rational, Vec<VertexId>, VertexId)> = None;
    for r in 0..instance.len() {
        if let Some((cost, set)) = rooted(instance, r, k)? {
            if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                best = Some((cost, set, r));
            }
        }
    }
    Ok(best)
}

/// Quota to k-Steiner tree: vertex `u` carries `q(u) = ⌈n π(u) / (εP)⌉` free
/// terminals and `k = ⌊n/ε⌋`.
pub fn quota_to_ksteiner(instance: &NodeWeightedInstance, quota: &Rational, epsilon: &Rational) -> Result<ReductionMap> {
    if !quota.is_positive() {
        return Err(Error::Precondition("the quota must be positive".into()));
    }
    if !epsilon.is_positive() || epsilon >= &int(1) {
        return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
    }
    let n = int(instance.len() as i64);
    let scale = &n / (epsilon * quota);
    let to_count = |r: Rational| -> Result<u64> { r.to_integer().to_u64().ok_or_else(|| Error::Precondition("terminal count overflows".into())) };
    let terminals = (0..instance.len())
        .map(|u| to_count((instance.prize(u) * &scale).ceil()))
        .collect::<Result<Vec<u64>>>()?;
    let k = to_count((&n / epsilon).floor())?;
    Ok(ReductionMap {
        kind: ReductionKind::QuotaToKSteiner,
        transformed: instance.clone(),
        k_prime: k,
        problem: CoverProblem::KSteiner { k, terminals, root: instance.root() },
        source_len: instance.len(),
    })
}

/// k-Steiner tree as a quota problem: prize 1 on terminals, 0 elsewhere, quota `k`.
pub fn ksteiner_from_quota(instance: &NodeWeightedInstance, terminals: &[VertexId], k: u64) -> Result<ReductionMap> {
    let mut prizes = vec![Rational::zero(); instance.len()];
    for &t in terminals {
        if t >= instance.len() {
            return Err(Error::InvalidInstance(format!("terminal {t} does not exist")));
        }
        prizes[t] = int(1);
    }
    let transformed = instance.with_weights(None, Some(prizes))?;
    Ok(ReductionMap {
        kind: ReductionKind::KSteinerFromQuota,
        k_prime: k,
        problem: CoverProblem::Quota { quota: Rational::from_integer(k.into()), root: instance.root() },
        transformed,
        source_len: instance.len(),
    })
}

/// The lower bound `P(1 - 2ε)` a lifted quota solution must beat.
pub fn quota_lift_bound(quota: &Rational, epsilon: &Rational) -> Rational {
    quota * (int(1) - int(2) * epsilon)
}
