//! Exponential-time exact solvers. Each comes with a structurally different
//! second enumeration used to cross-check it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, Zero};

use super::enumerate::{adjacency_masks, bit, flood, is_connected, members, to_vec, Enumerator, Mask, Visit};
use super::OracleBudget;
use crate::error::{Error, Result};
use crate::graph::{EdgeWeightedInstance, NodeWeightedInstance, VertexId};
use crate::rational::Rational;

fn mask_sum(values: &[Rational], mask: Mask) -> Rational {
    members(mask).fold(Rational::zero(), |acc, v| acc + &values[v])
}

fn costs_of(instance: &NodeWeightedInstance) -> Vec<Rational> {
    (0..instance.len()).map(|v| instance.cost(v).clone()).collect()
}

fn prizes_of(instance: &NodeWeightedInstance) -> Vec<Rational> {
    (0..instance.len()).map(|v| instance.prize(v).clone()).collect()
}

fn check_size(what: &str, count: usize, budget: &OracleBudget) -> Result<()> {
    if count > budget.max_vertices {
        return Err(Error::OracleLimit(format!(
            "{what}: {count} free vertices exceed the oracle limit of {}",
            budget.max_vertices
        )));
    }
    Ok(())
}

fn check_deadline(deadline: Instant, counter: u64) -> Result<()> {
    if counter.is_multiple_of(4096) && Instant::now() > deadline {
        return Err(Error::OracleLimit("oracle time limit exceeded".into()));
    }
    Ok(())
}

/// Minimum of `c(X) + Σ_{unsatisfied} π_i` over vertex sets `X`, a demand
/// being satisfied when both endpoints lie in one component of `X`. Zero-cost
/// vertices are always taken; every subset of the positive-cost vertices is
/// tried. Returns the objective and the witness without zero-cost terminals.
pub fn exact_pcsf(instance: &NodeWeightedInstance, budget: &OracleBudget) -> Result<(Rational, Vec<VertexId>)> {
    let adj = adjacency_masks(instance)?;
    if instance.demands().len() > budget.max_demands {
        return Err(Error::OracleLimit(format!("{} demands exceed the oracle limit", instance.demands().len())));
    }
    let free: Vec<VertexId> = (0..instance.len()).filter(|&v| instance.cost(v).is_positive()).collect();
    check_size("pcsf", free.len(), budget)?;
    let fixed: Mask = (0..instance.len()).filter(|&v| !instance.cost(v).is_positive()).fold(0, |m, v| m | bit(v));
    let free_terminals: Mask = instance.terminals().iter().fold(0, |m, &t| m | bit(t)) & fixed;
    let costs = costs_of(instance);
    let deadline = budget.deadline();
    let mut best: Option<(Rational, Mask)> = None;
    for pick in 0u64..(1 << free.len()) {
        check_deadline(deadline, pick)?;
        let chosen = free.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0, |m, (_, &v)| m | bit(v));
        let x = fixed | chosen;
        let mut value = mask_sum(&costs, x);
        for d in instance.demands() {
            if flood(&adj, bit(d.s), x) & bit(d.t) == 0 {
                value += &d.penalty;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, x));
        }
    }
    let (value, x) = best.expect("the empty purchase is always evaluated");
    Ok((value, to_vec(x & !free_terminals)))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut cur = v;
        while self.0[cur] != r {
            let next = self.0[cur];
            self.0[cur] = r;
            cur = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Second PCSF oracle: for every subset `D` of demands, the cheapest vertex
/// set connecting all of `D` (union-find connectivity), plus the penalties of
/// the demands outside `D`.
pub fn exact_pcsf_by_demand_subsets(instance: &NodeWeightedInstance, budget: &OracleBudget) -> Result<Rational> {
    let h = instance.demands().len();
    if h > budget.max_demands {
        return Err(Error::OracleLimit(format!("{h} demands exceed the oracle limit")));
    }
    let n = instance.len();
    let candidates: Vec<VertexId> = (0..n).filter(|&v| !instance.cost(v).is_zero()).collect();
    check_size("pcsf", candidates.len(), budget)?;
    let deadline = budget.deadline();
    let mut in_set = vec![false; n];
    // cheapest set connecting each demand subset
    let mut cheapest: BTreeMap<u64, Rational> = BTreeMap::new();
    for pick in 0u64..(1 << candidates.len()) {
        check_deadline(deadline, pick)?;
        for v in 0..n {
            in_set[v] = instance.cost(v).is_zero();
        }
        let mut cost = Rational::zero();
        for (i, &v) in candidates.iter().enumerate() {
            if pick >> i & 1 == 1 {
                in_set[v] = true;
                cost += instance.cost(v);
            }
        }
        let mut uf = UnionFind::new(n);
        for &(u, v) in instance.edges() {
            if in_set[u] && in_set[v] {
                uf.union(u, v);
            }
        }
        let mut satisfied = 0u64;
        for (i, d) in instance.demands().iter().enumerate() {
            if in_set[d.s] && in_set[d.t] && uf.find(d.s) == uf.find(d.t) {
                satisfied |= 1 << i;
            }
        }
        // a set satisfying `satisfied` also serves every subset of it
        let entry = cheapest.entry(satisfied).or_insert_with(|| cost.clone());
        if cost < *entry {
            *entry = cost;
        }
    }
    let mut best: Option<Rational> = None;
    for target in 0u64..(1 << h) {
        let Some(connect) = cheapest.iter().filter(|(sat, _)| *sat & target == target).map(|(_, c)| c).min().cloned() else {
            continue;
        };
        let penalties = instance
            .demands()
            .iter()
            .enumerate()
            .filter(|(i, _)| target >> i & 1 == 0)
            .fold(Rational::zero(), |acc, (_, d)| acc + &d.penalty);
        let value = connect + penalties;
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    Ok(best.expect("at least the empty demand subset"))
}

fn free_count(instance: &NodeWeightedInstance, root: Option<VertexId>) -> usize {
    instance.len() - usize::from(root.is_some())
}

/// Maximum prize of a connected vertex set (containing `root` if given) whose
/// cost is at most `limit`. Unrooted, the empty set (prize 0) is allowed.
pub fn exact_budgeted(
    instance: &NodeWeightedInstance,
    root: Option<VertexId>,
    limit: &Rational,
    budget: &OracleBudget,
) -> Result<(Rational, Vec<VertexId>)> {
    check_size("budgeted", free_count(instance, root), budget)?;
    let adj = adjacency_masks(instance)?;
    let costs = costs_of(instance);
    let prizes = prizes_of(instance);
    let all = if instance.is_empty() { 0 } else { u64::MAX >> (64 - instance.len()) };
    let mut best: Option<(Rational, Rational, Mask)> = None;
    let mut visit = |set: Mask| {
        let cost = mask_sum(&costs, set);
        if &cost > limit {
            return Visit::Prune;
        }
        let prize = mask_sum(&prizes, set);
        if better_prize(&best, &prize, &cost) {
            best = Some((prize, cost, set));
        }
        Visit::Extend
    };
    let mut e = Enumerator::new(&adj, all, Some(budget.deadline()));
    match root {
        Some(r) => {
            if instance.cost(r) > limit {
                return Err(Error::Infeasible("the root alone exceeds the budget".into()));
            }
            e.rooted(r, &mut visit)?;
        }
        None => e.all(&mut visit)?,
    }
    Ok(best.map_or((Rational::zero(), Vec::new()), |(p, _, s)| (p, to_vec(s))))
}

/// Higher prize wins, then lower cost, then first found.
fn better_prize(best: &Option<(Rational, Rational, Mask)>, prize: &Rational, cost: &Rational) -> bool {
    match best {
        None => true,
        Some((bp, bc, _)) => match prize.cmp(bp) {
            Ordering::Greater => true,
            Ordering::Equal => cost < bc,
            Ordering::Less => false,
        },
    }
}

/// Second budgeted oracle: plain subset enumeration with a connectivity test.
pub fn exact_budgeted_by_subsets(instance: &NodeWeightedInstance, root: Option<VertexId>, limit: &Rational, budget: &OracleBudget) -> Result<Rational> {
    check_size("budgeted", free_count(instance, root), budget)?;
    let adj = adjacency_masks(instance)?;
    let costs = costs_of(instance);
    let prizes = prizes_of(instance);
    let deadline = budget.deadline();
    let mut best: Option<Rational> = None;
    for set in 0u64..(1 << instance.len()) {
        check_deadline(deadline, set)?;
        if let Some(r) = root {
            if set & bit(r) == 0 {
                continue;
            }
        }
        if !is_connected(&adj, set) || &mask_sum(&costs, set) > limit {
            continue;
        }
        let prize = mask_sum(&prizes, set);
        if best.as_ref().is_none_or(|b| prize > *b) {
            best = Some(prize);
        }
    }
    best.ok_or_else(|| Error::Infeasible("the root alone exceeds the budget".into()))
}

/// Covering problems: minimum-cost connected set whose total weight reaches a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverProblem {
    /// At least `k` vertices, vertex `v` counting `multiplicity[v]` times (1 if absent).
    KMst { k: u64, root: Option<VertexId>, multiplicity: Option<Vec<u64>> },
    /// At least `k` terminals, vertex `v` carrying `terminals[v]` of them.
    KSteiner { k: u64, terminals: Vec<u64>, root: Option<VertexId> },
    /// Prize at least `quota`.
    Quota { quota: Rational, root: Option<VertexId> },
}

impl CoverProblem {
    pub fn root(&self) -> Option<VertexId> {
        match self {
            CoverProblem::KMst { root, .. } | CoverProblem::KSteiner { root, .. } | CoverProblem::Quota { root, .. } => *root,
        }
    }

    fn weights_and_target(&self, instance: &NodeWeightedInstance) -> (Vec<Rational>, Rational) {
        let n = instance.len();
        let from_counts = |c: &[u64]| c.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
        match self {
            CoverProblem::KMst { k, multiplicity, .. } => (
                multiplicity.as_deref().map_or_else(|| vec![Rational::from_integer(1.into()); n], from_counts),
                Rational::from_integer((*k).into()),
            ),
            CoverProblem::KSteiner { k, terminals, .. } => (from_counts(terminals), Rational::from_integer((*k).into())),
            CoverProblem::Quota { quota, .. } => (prizes_of(instance), quota.clone()),
        }
    }
}

/// Exact optimum of a covering problem, `None` when infeasible. Unrooted with
/// a nonpositive target, the empty set (cost 0) is optimal.
pub fn exact_quota_kmst(
    instance: &NodeWeightedInstance,
    problem: &CoverProblem,
    budget: &OracleBudget,
) -> Result<Option<(Rational, Vec<VertexId>)>> {
    let root = problem.root();
    check_size("cover", free_count(instance, root), budget)?;
    let (weights, target) = problem.weights_and_target(instance);
    if root.is_none() && !target.is_positive() {
        return Ok(Some((Rational::zero(), Vec::new())));
    }
    let adj = adjacency_masks(instance)?;
    let costs = costs_of(instance);
    let all = if instance.is_empty() { 0 } else { u64::MAX >> (64 - instance.len()) };
    let mut best: Option<(Rational, Mask)> = None;
    let mut visit = |set: Mask| {
        let cost = mask_sum(&costs, set);
        if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return Visit::Prune;
        }
        if mask_sum(&weights, set) >= target {
            best = Some((cost, set));
            return Visit::Prune;
        }
        Visit::Extend
    };
    let mut e = Enumerator::new(&adj, all, Some(budget.deadline()));
    match root {
        Some(r) => e.rooted(r, &mut visit)?,
        None => e.all(&mut visit)?,
    }
    Ok(best.map(|(c, s)| (c, to_vec(s))))
}

/// Second covering oracle by plain subset enumeration.
pub fn exact_quota_kmst_by_subsets(instance: &NodeWeightedInstance, problem: &CoverProblem, budget: &OracleBudget) -> Result<Option<Rational>> {
    let root = problem.root();
    check_size("cover", free_count(instance, root), budget)?;
    let (weights, target) = problem.weights_and_target(instance);
    let adj = adjacency_masks(instance)?;
    let costs = costs_of(instance);
    let deadline = budget.deadline();
    let mut best: Option<Rational> = None;
    for set in 0u64..(1 << instance.len()) {
        check_deadline(deadline, set)?;
        if root.is_some_and(|r| set & bit(r) == 0) || (set == 0 && root.is_none() && target.is_positive()) {
            continue;
        }
        if !is_connected(&adj, set) || mask_sum(&weights, set) < target {
            continue;
        }
        let cost = mask_sum(&costs, set);
        if best.as_ref().is_none_or(|b| cost < *b) {
            best = Some(cost);
        }
    }
    Ok(best)
}

/// Maximum of `π(S) - c(S)` over connected `S` containing `root`; unrooted,
/// over all connected `S` including the empty set.
pub fn exact_net_worth(instance: &NodeWeightedInstance, root: Option<VertexId>, budget: &OracleBudget) -> Result<(Rational, Vec<VertexId>)> {
    check_size("net worth", free_count(instance, root), budget)?;
    let adj = adjacency_masks(instance)?;
    let costs = costs_of(instance);
    let prizes = prizes_of(instance);
    let all = if instance.is_empty() { 0 } else { u64::MAX >> (64 - instance.len()) };
    let mut best: Option<(Rational, Mask)> = if root.is_none() { Some((Rational::zero(), 0)) } else { None };
    let mut visit = |set: Mask| {
        let value = mask_sum(&prizes, set) - mask_sum(&costs, set);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, set));
        }
        Visit::Extend
    };
    let mut e = Enumerator::new(&adj, all, Some(budget.deadline()));
    match root {
        Some(r) => e.rooted(r, &mut visit)?,
        None => e.all(&mut visit)?,
    }
    let (value, set) = best.expect("rooted enumeration visits the root");
    Ok((value, to_vec(set)))
}

fn edge_weighted_adjacency(instance: &EdgeWeightedInstance) -> Result<Vec<Mask>> {
    if instance.len() > 64 {
        return Err(Error::OracleLimit("too many vertices for the enumeration width".into()));
    }
    let mut adj = vec![0; instance.len()];
    for &(u, v, _) in &instance.edges {
        adj[u] |= bit(v);
        adj[v] |= bit(u);
    }
    Ok(adj)
}

/// Minimum spanning tree weight of the subgraph induced by `set` (assumed connected).
fn induced_mst(instance: &EdgeWeightedInstance, order: &[usize], set: Mask) -> Rational {
    let mut uf = UnionFind::new(instance.len());
    let mut total = Rational::zero();
    for &e in order {
        let (u, v, w) = &instance.edges[e];
        if set & bit(*u) != 0 && set & bit(*v) != 0 && uf.find(*u) != uf.find(*v) {
            uf.union(*u, *v);
            total += w;
        }
    }
    total
}

fn edge_order(instance: &EdgeWeightedInstance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.edges.len()).collect();
    order.sort_by(|&a, &b| instance.edges[a].2.cmp(&instance.edges[b].2).then(a.cmp(&b)));
    order
}

/// Edge-weighted net worth: connected vertex sets containing `root`, each
/// paying for a minimum spanning tree of its induced subgraph.
pub fn exact_net_worth_edge_weighted(instance: &EdgeWeightedInstance, root: VertexId, budget: &OracleBudget) -> Result<Rational> {
    check_size("net worth", instance.len() - 1, budget)?;
    let adj = edge_weighted_adjacency(instance)?;
    let order = edge_order(instance);
    let all = u64::MAX >> (64 - instance.len());
    let mut best: Option<Rational> = None;
    Enumerator::new(&adj, all, Some(budget.deadline())).rooted(root, &mut |set| {
        let prize = members(set).fold(Rational::zero(), |acc, v| acc + instance.prize(v));
        let value = prize - induced_mst(instance, &order, set);
        if best.as_ref().is_none_or(|b| value > *b) {
            best = Some(value);
        }
        Visit::Extend
    })?;
    Ok(best.expect("the root is visited"))
}

/// Edge-weighted rooted budgeted optimum: maximum prize of a connected set
/// containing `root` whose induced minimum spanning tree costs at most `limit`.
pub fn exact_budgeted_edge_weighted(instance: &EdgeWeightedInstance, root: VertexId, limit: &Rational, budget: &OracleBudget) -> Result<Rational> {
    check_size("budgeted", instance.len() - 1, budget)?;
    let adj = edge_weighted_adjacency(instance)?;
    let order = edge_order(instance);
    let all = u64::MAX >> (64 - instance.len());
    let mut best = Rational::zero();
    Enumerator::new(&adj, all, Some(budget.deadline())).rooted(root, &mut |set| {
        if &induced_mst(instance, &order, set) <= limit {
            let prize = members(set).fold(Rational::zero(), |acc, v| acc + instance.prize(v));
            if prize > best {
                best = prize;
            }
        }
        Visit::Extend
    })?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{normalize_demands, Demand, Vertex};
    use crate::rational::int;

    fn inst(costs: &[i64], prizes: &[i64], edges: &[(usize, usize)]) -> NodeWeightedInstance {
        let vertices = costs
            .iter()
            .zip(prizes)
            .enumerate()
            .map(|(i, (&c, &p))| Vertex { name: format!("v{i}"), cost: int(c), prize: int(p) })
            .collect();
        NodeWeightedInstance::new(vertices, edges.to_vec(), vec![], None, None).unwrap()
    }

    #[test]
    fn pcsf_without_demands_is_free() {
        let g = inst(&[3, 4], &[0, 0], &[(0, 1)]);
        let (v, w) = exact_pcsf(&g, &OracleBudget::default()).unwrap();
        assert_eq!(v, int(0));
        assert!(w.is_empty());
    }

    #[test]
    fn pcsf_zero_cost_path() {
        let g = normalize_demands(&inst(&[0, 0, 0], &[0, 0, 0], &[(0, 1), (1, 2)]).with_demands(vec![Demand { s: 0, t: 2, penalty: int(7) }]).unwrap());
        assert_eq!(exact_pcsf(&g, &OracleBudget::default()).unwrap().0, int(0));
        assert_eq!(exact_pcsf_by_demand_subsets(&g, &OracleBudget::default()).unwrap(), int(0));
    }

    #[test]
    fn pcsf_prefers_penalty_when_cheaper() {
        let g = inst(&[0, 5, 0], &[0, 0, 0], &[(0, 1), (1, 2)]);
        let cheap = g.with_demands(vec![Demand { s: 0, t: 2, penalty: int(3) }]).unwrap();
        let dear = g.with_demands(vec![Demand { s: 0, t: 2, penalty: int(9) }]).unwrap();
        assert_eq!(exact_pcsf(&cheap, &OracleBudget::default()).unwrap().0, int(3));
        assert_eq!(exact_pcsf(&dear, &OracleBudget::default()).unwrap(), (int(5), vec![1]));
    }

    #[test]
    fn budgeted_examples() {
        let g = inst(&[0, 2, 3], &[4, 1, 5], &[(0, 1), (1, 2)]);
        let b = OracleBudget::default();
        assert_eq!(exact_budgeted(&g, Some(0), &int(0), &b).unwrap().0, int(4));
        assert_eq!(exact_budgeted(&g, Some(0), &int(100), &b).unwrap().0, int(10));
        // {0,1} and {2} both reach prize 5; the cheaper one wins
        assert_eq!(exact_budgeted(&g, None, &int(3), &b).unwrap(), (int(5), vec![0, 1]));
        assert_eq!(exact_budgeted_by_subsets(&g, None, &int(3), &b).unwrap(), int(5));
        assert!(exact_budgeted(&g, Some(2), &int(2), &b).is_err());
    }

    #[test]
    fn cover_examples() {
        let g = inst(&[4, 1, 3], &[1, 1, 1], &[(0, 1), (1, 2)]);
        let b = OracleBudget::default();
        let k1 = CoverProblem::KMst { k: 1, root: None, multiplicity: None };
        assert_eq!(exact_quota_kmst(&g, &k1, &b).unwrap().unwrap().0, int(1));
        let kn = CoverProblem::KMst { k: 3, root: None, multiplicity: None };
        assert_eq!(exact_quota_kmst(&g, &kn, &b).unwrap().unwrap().0, g.total_cost());
        let q0 = CoverProblem::Quota { quota: int(0), root: None };
        assert_eq!(exact_quota_kmst(&g, &q0, &b).unwrap().unwrap().0, int(0));
        let too_many = CoverProblem::KMst { k: 4, root: None, multiplicity: None };
        assert_eq!(exact_quota_kmst(&g, &too_many, &b).unwrap(), None);
    }

    #[test]
    fn net_worth_rooted_single_vertex() {
        let g = inst(&[2, 10], &[5, 1], &[(0, 1)]);
        let b = OracleBudget::default();
        assert_eq!(exact_net_worth(&g, Some(0), &b).unwrap().0, int(3));
        assert_eq!(exact_net_worth(&g, None, &b).unwrap().0, int(3));
        let poor = inst(&[2], &[1], &[]);
        assert_eq!(exact_net_worth(&poor, Some(0), &b).unwrap().0, int(-1));
        assert_eq!(exact_net_worth(&poor, None, &b).unwrap().0, int(0));
    }

    #[test]
    fn limits_are_enforced() {
        let g = inst(&[1; 5], &[0; 5], &[(0, 1)]);
        let tight = OracleBudget { max_vertices: 3, ..OracleBudget::default() };
        assert!(matches!(exact_budgeted(&g, None, &int(1), &tight), Err(Error::OracleLimit(_))));
    }
}
