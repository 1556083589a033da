//! Explicit replay of disk growth. Each disk's nested family of sets is
//! rebuilt by growing a set from the core and absorbing vertices as their
//! charge reaches their cost; the resulting `y(S)` values are then checked
//! against both dual constraint families one set at a time.
//!
//! Distances here come from a plain Bellman-Ford relaxation so that the
//! checks do not share code with the solver's Dijkstra.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{CostFunction, DemandId, NodeWeightedInstance, VertexId};
use crate::rational::Rational;

/// Replays touch every set explicitly, so inputs are kept small.
pub const LAMINAR_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskReplay {
    pub center: VertexId,
    pub radius: Rational,
    /// The nested sets with positive `y`, innermost first.
    pub sets: Vec<(BTreeSet<VertexId>, Rational)>,
    /// `Σ_{S : v ∈ δ(S)} y(S)` for every vertex.
    pub charge: Vec<Rational>,
    /// Node-weighted distance from the center, `None` when unreachable.
    pub dist: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarReport {
    pub feasible: bool,
    pub violations: Vec<String>,
    pub disks: Vec<DiskReplay>,
}

fn distances(instance: &NodeWeightedInstance, cost: &[Rational], center: VertexId) -> Vec<Option<Rational>> {
    let mut dist: Vec<Option<Rational>> = vec![None; instance.len()];
    dist[center] = Some(cost[center].clone());
    loop {
        let mut changed = false;
        for &(u, v) in instance.edges() {
            for (a, b) in [(u, v), (v, u)] {
                if let Some(da) = dist[a].clone() {
                    let cand = da + &cost[b];
                    if dist[b].as_ref().is_none_or(|db| cand < *db) {
                        dist[b] = Some(cand);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

fn boundary_of(instance: &NodeWeightedInstance, set: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    set.iter()
        .flat_map(|&v| instance.neighbors(v).iter().copied())
        .filter(|w| !set.contains(w))
        .collect()
}

/// Grows one disk of the given radius around `center`.
pub fn replay_disk(instance: &NodeWeightedInstance, cost: &[Rational], center: VertexId, radius: &Rational) -> DiskReplay {
    let mut set = BTreeSet::from([center]);
    let mut charge = vec![Rational::zero(); instance.len()];
    let mut growth = Rational::zero();
    let mut sets = Vec::new();
    loop {
        // absorb tight vertices; zero-cost ones cascade, which also pulls in the core
        loop {
            let tight: Vec<VertexId> = boundary_of(instance, &set).into_iter().filter(|&v| charge[v] >= cost[v]).collect();
            if tight.is_empty() {
                break;
            }
            set.extend(tight);
        }
        if &growth >= radius {
            break;
        }
        let delta = boundary_of(instance, &set);
        let mut step = radius - &growth;
        for &v in &delta {
            let slack = &cost[v] - &charge[v];
            if slack < step {
                step = slack;
            }
        }
        for &v in &delta {
            charge[v] += &step;
        }
        growth += &step;
        sets.push((set.clone(), step));
    }
    DiskReplay { center, radius: radius.clone(), sets, charge, dist: distances(instance, cost, center) }
}

/// Half the penalty of the active demands separated by `set`.
fn separated_penalty(instance: &NodeWeightedInstance, active: &BTreeSet<DemandId>, set: &BTreeSet<VertexId>) -> Rational {
    let total = active
        .iter()
        .map(|&i| &instance.demands()[i])
        .filter(|d| set.contains(&d.s) != set.contains(&d.t))
        .fold(Rational::zero(), |acc, d| acc + &d.penalty);
    total / Rational::from_integer(2.into())
}

fn zero_component(instance: &NodeWeightedInstance, cost: &[Rational], start: VertexId) -> BTreeSet<VertexId> {
    let mut comp = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in instance.neighbors(v) {
            if cost[w].is_zero() && comp.insert(w) {
                stack.push(w);
            }
        }
    }
    comp
}

/// Replays every disk `(center, radius)` under `cost` and checks the union:
/// per-vertex charge at most its cost, per-core accumulated `y` at most the
/// penalty of the separated active demands, and no positive set reaching
/// into a different core.
pub fn check_laminar_dual(
    instance: &NodeWeightedInstance,
    cost: &CostFunction<'_>,
    active: &BTreeSet<DemandId>,
    disks: &[(VertexId, Rational)],
) -> Result<LaminarReport> {
    if instance.len() > LAMINAR_MAX_VERTICES {
        return Err(Error::OracleLimit(format!(
            "laminar replay supports at most {LAMINAR_MAX_VERTICES} vertices, got {}",
            instance.len()
        )));
    }
    let costs: Vec<Rational> = (0..instance.len()).map(|v| cost.value(v)).collect();
    let endpoints: BTreeSet<VertexId> = active
        .iter()
        .flat_map(|&i| [instance.demands()[i].s, instance.demands()[i].t])
        .collect();
    let mut violations = Vec::new();
    let mut cores: Vec<BTreeSet<VertexId>> = Vec::new();
    for &v in &endpoints {
        if !costs[v].is_zero() {
            violations.push(format!("active endpoint {} has positive cost", instance.name(v)));
        } else if !cores.iter().any(|c| c.contains(&v)) {
            cores.push(zero_component(instance, &costs, v));
        }
    }
    let mut replays = Vec::with_capacity(disks.len());
    for (center, radius) in disks {
        if radius.is_negative() {
            violations.push(format!("disk at {} has negative radius", instance.name(*center)));
            continue;
        }
        let replay = replay_disk(instance, &costs, *center, radius);
        let own = cores.iter().position(|c| c.contains(center));
        let mut cumulative = Rational::zero();
        for (set, y) in &replay.sets {
            cumulative += y;
            for (j, core) in cores.iter().enumerate() {
                if Some(j) != own && !set.is_disjoint(core) {
                    violations.push(format!("disk at {} reaches another core with positive y", instance.name(*center)));
                }
            }
            let cap = separated_penalty(instance, active, set);
            if cumulative > cap {
                violations.push(format!(
                    "disk at {}: accumulated y {} exceeds separated penalty {}",
                    instance.name(*center),
                    cumulative,
                    cap
                ));
            }
        }
        replays.push(replay);
    }
    for v in 0..instance.len() {
        let total = replays.iter().fold(Rational::zero(), |acc, r| acc + &r.charge[v]);
        if total > costs[v] {
            violations.push(format!("vertex {} charged {} above its cost {}", instance.name(v), total, costs[v]));
        }
    }
    violations.dedup();
    Ok(LaminarReport { feasible: violations.is_empty(), violations, disks: replays })
}

/// Checks the structural identities of one replayed disk: total value equals
/// the radius, vertices inside are tight, positive sets contain the center and
/// stay inside, and boundary vertices carry exactly `R - (d(v) - c(v))`.
pub fn check_disk_facts(instance: &NodeWeightedInstance, cost: &[Rational], replay: &DiskReplay) -> Vec<String> {
    let mut problems = Vec::new();
    let r = &replay.radius;
    let total = replay.sets.iter().fold(Rational::zero(), |acc, (_, y)| acc + y);
    if &total != r {
        problems.push(format!("disk value {total} differs from radius {r}"));
    }
    let inside = |v: VertexId| replay.dist[v].as_ref().is_some_and(|d| d < r);
    for v in 0..instance.len() {
        if inside(v) && replay.charge[v] != cost[v] && !replay.sets.iter().all(|(s, _)| s.contains(&v)) {
            problems.push(format!("inside vertex {} is not tight", instance.name(v)));
        }
    }
    for (set, y) in &replay.sets {
        if y.is_positive() {
            if !set.contains(&replay.center) {
                problems.push("positive set misses the center".into());
            }
            if let Some(&v) = set.iter().find(|&&v| !inside(v)) {
                problems.push(format!("positive set leaves the continent at {}", instance.name(v)));
            }
        }
    }
    for v in 0..instance.len() {
        if inside(v) {
            continue;
        }
        let near = instance.neighbors(v).iter().any(|&u| replay.dist[u].as_ref().is_some_and(|d| d <= r));
        if !near {
            continue;
        }
        let d = replay.dist[v].as_ref().expect("a neighbor is reachable");
        let expected = r - (d - &cost[v]);
        if replay.charge[v] != expected {
            problems.push(format!("boundary vertex {} carries {} instead of {}", instance.name(v), replay.charge[v], expected));
        }
    }
    problems
}
