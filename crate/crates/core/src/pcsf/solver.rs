use std::collections::BTreeSet;

use num_traits::Zero;

use super::certificate::{CertificateRound, DualCertificate, RoundKind};
use super::disk::{build_iteration, core_components, DiskSystem, EventKind, GrowthEvent};
use crate::error::{Error, Result};
use crate::graph::{zero_cost_components, CostFunction, DemandId, NodeWeightedInstance, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventOutcome {
    pub bought: Vec<VertexId>,
    pub deactivated: Vec<DemandId>,
    pub cores_removed: usize,
    pub payment: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcsfSolution {
    /// Non-terminal vertices of the solution.
    pub bought: Vec<VertexId>,
    pub satisfied: Vec<DemandId>,
    pub paid: Vec<DemandId>,
    pub objective: Rational,
}

/// State entering one iteration, enough to rebuild its [`DiskSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub bought: Vec<VertexId>,
    pub active: BTreeSet<DemandId>,
    pub event: GrowthEvent,
    pub outcome: EventOutcome,
}

fn connected_demands(instance: &NodeWeightedInstance, bought: &[VertexId], candidates: &BTreeSet<DemandId>) -> Vec<DemandId> {
    let terminals = instance.terminals();
    let cost = CostFunction::zeroing(instance, bought.iter().chain(&terminals));
    let mut comp_of = vec![usize::MAX; instance.len()];
    for (k, comp) in zero_cost_components(instance, &cost).iter().enumerate() {
        for &v in comp {
            comp_of[v] = k;
        }
    }
    candidates
        .iter()
        .copied()
        .filter(|&i| {
            let d = &instance.demands()[i];
            comp_of[d.s] == comp_of[d.t]
        })
        .collect()
}

fn core_count(instance: &NodeWeightedInstance, bought: &[VertexId], active: &BTreeSet<DemandId>) -> usize {
    if active.is_empty() {
        return 0;
    }
    let terminals = instance.terminals();
    let cost = CostFunction::zeroing(instance, bought.iter().chain(&terminals));
    core_components(instance, &cost, active).len()
}

/// Resolves one event: a penalty event pays for the demands leaving a core, a
/// vertex event buys the shortest paths from the tight vertex to every
/// charging core and retires the demands that become connected.
pub fn apply_event(sys: &DiskSystem<'_>, bought: &[VertexId], event: &GrowthEvent) -> EventOutcome {
    let instance = sys.instance;
    let before = sys.cores.len();
    match &event.kind {
        EventKind::PenaltyTight { core } => {
            let members: BTreeSet<VertexId> = sys.cores[*core].vertices.iter().copied().collect();
            let deactivated: Vec<DemandId> = sys
                .active
                .iter()
                .copied()
                .filter(|&i| {
                    let d = &instance.demands()[i];
                    members.contains(&d.s) != members.contains(&d.t)
                })
                .collect();
            let payment = deactivated.iter().fold(Rational::zero(), |acc, &i| acc + &instance.demands()[i].penalty);
            let remaining: BTreeSet<DemandId> = sys.active.iter().copied().filter(|i| !deactivated.contains(i)).collect();
            EventOutcome {
                bought: Vec::new(),
                cores_removed: before - core_count(instance, bought, &remaining),
                deactivated,
                payment,
            }
        }
        EventKind::VertexTight { vertex, charging } => {
            let mut delta = BTreeSet::new();
            for &k in charging {
                for v in sys.dist[k].path_to_source(*vertex) {
                    if !sys.cost.is_zero(v) {
                        delta.insert(v);
                    }
                }
            }
            let payment = delta.iter().fold(Rational::zero(), |acc, &v| acc + sys.cost.value(v));
            let mut next: Vec<VertexId> = bought.to_vec();
            next.extend(delta.iter().copied());
            let deactivated = connected_demands(instance, &next, &sys.active);
            let remaining: BTreeSet<DemandId> = sys.active.iter().copied().filter(|i| !deactivated.contains(i)).collect();
            EventOutcome {
                bought: delta.into_iter().collect(),
                cores_removed: before - core_count(instance, &next, &remaining),
                deactivated,
                payment,
            }
        }
    }
}

pub fn solve_pcsf(instance: &NodeWeightedInstance) -> Result<(PcsfSolution, DualCertificate)> {
    let (solution, certificate, _) = solve_pcsf_traced(instance)?;
    Ok((solution, certificate))
}

/// Runs the algorithm and also returns the state entering every iteration.
/// The instance must have normalized demands (see
/// [`crate::graph::normalize_demands`]).
pub fn solve_pcsf_traced(instance: &NodeWeightedInstance) -> Result<(PcsfSolution, DualCertificate, Vec<IterationTrace>)> {
    if !instance.is_normalized() {
        return Err(Error::Precondition(
            "demand endpoints must be distinct zero-cost leaves; normalize the demands first".into(),
        ));
    }
    let terminals = instance.terminals();
    let mut bought: Vec<VertexId> = Vec::new();
    let all: BTreeSet<DemandId> = (0..instance.demands().len()).collect();
    let already = connected_demands(instance, &bought, &all);
    let mut active: BTreeSet<DemandId> = all.into_iter().filter(|i| !already.contains(i)).collect();
    let mut rounds = Vec::new();
    let mut trace = Vec::new();
    while !active.is_empty() {
        let sys = build_iteration(instance, &bought, &active)?;
        let event = sys.next_event()?;
        let outcome = apply_event(&sys, &bought, &event);
        if outcome.cores_removed == 0 {
            return Err(Error::Precondition("iteration made no progress".into()));
        }
        rounds.push(CertificateRound {
            core_count: sys.cores.len(),
            radius: event.radius.clone(),
            removed: outcome.cores_removed,
            payment: outcome.payment.clone(),
            kind: match event.kind {
                EventKind::PenaltyTight { .. } => RoundKind::PenaltyTight,
                EventKind::VertexTight { .. } => RoundKind::VertexTight,
            },
        });
        let entering = bought.clone();
        bought.extend(outcome.bought.iter().copied());
        for i in &outcome.deactivated {
            active.remove(i);
        }
        trace.push(IterationTrace { bought: entering, active: sys.active.clone(), event, outcome });
    }

    let terminal_set: BTreeSet<VertexId> = terminals.iter().copied().collect();
    let mut solution_set: BTreeSet<VertexId> = bought.iter().copied().collect();
    solution_set.extend((0..instance.len()).filter(|&v| instance.cost(v).is_zero()));
    let member = instance.membership(solution_set.iter().chain(&terminals));
    let mut comp_of = vec![usize::MAX; instance.len()];
    for (k, comp) in instance.components_within(&member).iter().enumerate() {
        for &v in comp {
            comp_of[v] = k;
        }
    }
    let (satisfied, paid): (Vec<DemandId>, Vec<DemandId>) =
        (0..instance.demands().len()).partition(|&i| comp_of[instance.demands()[i].s] == comp_of[instance.demands()[i].t]);
    let bought_out: Vec<VertexId> = solution_set.into_iter().filter(|v| !terminal_set.contains(v)).collect();
    let total_cost = instance.set_cost(&bought_out);
    let total_penalty = paid.iter().fold(Rational::zero(), |acc, &i| acc + &instance.demands()[i].penalty);
    let objective = &total_cost + &total_penalty;
    let certificate = DualCertificate::new(rounds, total_cost, total_penalty, objective.clone());
    Ok((PcsfSolution { bought: bought_out, satisfied, paid, objective }, certificate, trace))
}
