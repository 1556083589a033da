//! Simultaneous disk growth for one iteration of the prize-collecting
//! Steiner forest algorithm.
//!
//! Each disk is represented by its core, its radius and a shortest-path map
//! from the core. For a vertex `v` and core `k` let `a_k(v) = d_k(v) - c(v)`
//! be the distance at which disk `k` first touches `v`. At radius `R` disk `k`
//! charges `v` exactly `clamp(R - a_k(v), 0, c(v))`; the nested family of sets
//! is never materialized.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{shortest_paths, zero_cost_components, CostFunction, DemandId, DistanceMap, NodeWeightedInstance, VertexId};
use crate::rational::{Distance, Rational};

pub type CoreId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Core {
    pub id: CoreId,
    pub vertices: Vec<VertexId>,
    pub center: VertexId,
    /// Half the total penalty of active demands with one endpoint in the core.
    pub penalty_budget: Rational,
}

#[derive(Debug, Clone)]
pub struct DiskSystem<'a> {
    pub instance: &'a NodeWeightedInstance,
    pub cost: CostFunction<'a>,
    pub active: BTreeSet<DemandId>,
    pub cores: Vec<Core>,
    pub dist: Vec<DistanceMap>,
    core_of: Vec<Option<CoreId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    PenaltyTight { core: CoreId },
    VertexTight { vertex: VertexId, charging: Vec<CoreId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthEvent {
    pub kind: EventKind,
    pub radius: Rational,
}

/// Zero-cost components (under `cost`) holding an endpoint of an active demand.
pub fn core_components(instance: &NodeWeightedInstance, cost: &CostFunction<'_>, active: &BTreeSet<DemandId>) -> Vec<Vec<VertexId>> {
    let endpoints: BTreeSet<VertexId> = active
        .iter()
        .flat_map(|&i| {
            let d = &instance.demands()[i];
            [d.s, d.t]
        })
        .collect();
    zero_cost_components(instance, cost)
        .into_iter()
        .filter(|comp| comp.iter().any(|v| endpoints.contains(v)))
        .collect()
}

/// Sets up the disks of one iteration: costs of `bought` and of all terminals
/// are zeroed, and every zero-cost component holding an active endpoint
/// becomes a core centred at its lowest-id active endpoint.
pub fn build_iteration<'a>(
    instance: &'a NodeWeightedInstance,
    bought: &[VertexId],
    active: &BTreeSet<DemandId>,
) -> Result<DiskSystem<'a>> {
    if active.is_empty() {
        return Err(Error::Precondition("an iteration needs at least one active demand".into()));
    }
    let terminals = instance.terminals();
    let cost = CostFunction::zeroing(instance, bought.iter().chain(&terminals));
    let components = core_components(instance, &cost, active);
    let mut core_of = vec![None; instance.len()];
    for (k, comp) in components.iter().enumerate() {
        for &v in comp {
            core_of[v] = Some(k);
        }
    }
    let mut budgets = vec![Rational::zero(); components.len()];
    let mut centers: Vec<Option<VertexId>> = vec![None; components.len()];
    for &i in active {
        let d = &instance.demands()[i];
        let (ks, kt) = (core_of[d.s].expect("endpoint in a core"), core_of[d.t].expect("endpoint in a core"));
        if ks == kt {
            return Err(Error::Precondition(format!("active demand {i} already has both endpoints in one core")));
        }
        let half = &d.penalty / Rational::from_integer(2.into());
        budgets[ks] += &half;
        budgets[kt] += &half;
        for (k, e) in [(ks, d.s), (kt, d.t)] {
            centers[k] = Some(centers[k].map_or(e, |c| c.min(e)));
        }
    }
    let dist = components
        .par_iter()
        .map(|comp| shortest_paths(instance, &cost, comp).expect("cores are nonempty"))
        .collect();
    let cores = components
        .into_iter()
        .zip(budgets)
        .zip(centers)
        .enumerate()
        .map(|(id, ((vertices, penalty_budget), center))| Core {
            id,
            vertices,
            center: center.expect("every core holds an active endpoint"),
            penalty_budget,
        })
        .collect();
    Ok(DiskSystem { instance, cost, active: active.clone(), cores, dist, core_of })
}

/// Radius at which `Σ_k clamp(R - a_k, 0, c)` stops being `<= c` for good,
/// i.e. `sup { R : g(R) <= c }`. `None` when fewer than two disks reach the
/// vertex (the sum can then never exceed `c`).
pub fn vertex_tight_radius(cost: &Rational, touch: &[Rational]) -> Option<Rational> {
    if touch.len() < 2 {
        return None;
    }
    let charge = |r: &Rational| -> Rational {
        touch.iter().fold(Rational::zero(), |acc, a| {
            let term = r - a;
            if term.is_positive() {
                acc + if &term > cost { cost.clone() } else { term }
            } else {
                acc
            }
        })
    };
    let mut breakpoints: Vec<Rational> = touch.iter().flat_map(|a| [a.clone(), a + cost]).collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut prev: Option<(Rational, Rational)> = None;
    for b in breakpoints {
        let g = charge(&b);
        if &g > cost {
            let (p, gp) = prev.expect("the smallest breakpoint carries no charge");
            let slope = touch.iter().filter(|a| **a <= p && p < *a + cost).count();
            debug_assert!(slope > 0);
            return Some(p + (cost - gp) / Rational::from_integer(slope.into()));
        }
        prev = Some((b, g));
    }
    None
}

impl<'a> DiskSystem<'a> {
    pub fn core_of(&self, v: VertexId) -> Option<CoreId> {
        self.core_of[v]
    }

    /// `a_k(v)` for every core whose disk can reach `v`, as `(core, a_k(v))`.
    pub fn touch_distances(&self, v: VertexId) -> Vec<(CoreId, Rational)> {
        let c = self.cost.value(v);
        self.dist
            .iter()
            .enumerate()
            .filter_map(|(k, dm)| dm.get(v).finite().map(|d| (k, d - &c)))
            .collect()
    }

    /// Total charge on `v` from all disks at `radius`.
    pub fn charge(&self, v: VertexId, radius: &Rational) -> Rational {
        let c = self.cost.value(v);
        self.touch_distances(v).into_iter().fold(Rational::zero(), |acc, (_, a)| {
            let term = radius - a;
            if term.is_positive() {
                acc + if term > c { c.clone() } else { term }
            } else {
                acc
            }
        })
    }

    /// The first event as the common radius grows. Ties prefer penalty
    /// events, then the lowest core or vertex id.
    pub fn next_event(&self) -> Result<GrowthEvent> {
        if self.cores.is_empty() {
            return Err(Error::Precondition("no cores to grow".into()));
        }
        let mut best: Option<(Rational, u8, usize, EventKind)> = None;
        let mut offer = |radius: Rational, rank: u8, id: usize, kind: EventKind| {
            let better = match &best {
                None => true,
                Some((r, k, i, _)) => (&radius, rank, id) < (r, *k, *i),
            };
            if better {
                best = Some((radius, rank, id, kind));
            }
        };
        for core in &self.cores {
            offer(core.penalty_budget.clone(), 0, core.id, EventKind::PenaltyTight { core: core.id });
        }
        for v in 0..self.instance.len() {
            let c = self.cost.value(v);
            if c.is_zero() {
                continue;
            }
            let touch = self.touch_distances(v);
            let arrivals: Vec<Rational> = touch.iter().map(|(_, a)| a.clone()).collect();
            if let Some(radius) = vertex_tight_radius(&c, &arrivals) {
                let charging = touch.iter().filter(|(_, a)| *a <= radius).map(|(k, _)| *k).collect();
                offer(radius, 1, v, EventKind::VertexTight { vertex: v, charging });
            }
        }
        let (radius, _, _, kind) = best.expect("penalty candidates always exist");
        Ok(GrowthEvent { kind, radius })
    }

    /// Whether the union of disks of common radius `radius` is feasible for
    /// the simplified dual: every core within its penalty budget, every vertex
    /// charged at most its cost, and no disk swallowing part of another core.
    pub fn verify_dual_feasibility(&self, radius: &Rational) -> bool {
        if radius.is_negative() {
            return false;
        }
        if self.cores.iter().any(|core| radius > &core.penalty_budget) {
            return false;
        }
        for v in 0..self.instance.len() {
            let c = self.cost.value(v);
            if c.is_positive() && self.charge(v, radius) > c {
                return false;
            }
        }
        for (k, dm) in self.dist.iter().enumerate() {
            for other in self.cores.iter().filter(|o| o.id != k) {
                if other.vertices.iter().any(|&u| matches!(dm.get(u), Distance::Finite(d) if d < radius)) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn two_disks_meeting_on_one_vertex() {
        assert_eq!(vertex_tight_radius(&int(6), &[int(0), int(0)]), Some(int(3)));
    }

    #[test]
    fn absorbed_vertex_fires_when_second_disk_arrives() {
        // first disk swallows the vertex at 1, second touches it at 5
        assert_eq!(vertex_tight_radius(&int(1), &[int(0), int(5)]), Some(int(5)));
    }

    #[test]
    fn staggered_arrivals() {
        // R - 0 + R - 2 = 6  =>  R = 4
        assert_eq!(vertex_tight_radius(&int(6), &[int(0), int(2)]), Some(int(4)));
        // three disks: (R) + (R-1) + (R-1) = 4 with R >= 1 => R = 2
        assert_eq!(vertex_tight_radius(&int(4), &[int(0), int(1), int(1)]), Some(int(2)));
        assert_eq!(vertex_tight_radius(&int(1), &[int(0), int(0), int(0)]), Some(ratio(1, 3)));
    }

    #[test]
    fn single_disk_never_fires() {
        assert_eq!(vertex_tight_radius(&int(3), &[int(0)]), None);
        assert_eq!(vertex_tight_radius(&int(3), &[]), None);
    }
}
