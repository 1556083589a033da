use std::collections::BTreeSet;

use num_traits::Zero;

use super::exact::CoverProblem;
use crate::graph::{NodeWeightedInstance, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemKind {
    /// Objective: cost of the set plus penalties of the demands it leaves disconnected.
    Pcsf,
    /// Objective: prize of a connected set within the budget.
    Budgeted { root: Option<VertexId>, budget: Rational },
    /// Objective: cost of a connected set meeting the covering target.
    Cover(CoverProblem),
    /// Objective: prize minus cost of a connected set.
    NetWorth { root: Option<VertexId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionReport {
    pub valid: bool,
    pub issues: Vec<String>,
    pub objective: Rational,
}

fn reach(instance: &NodeWeightedInstance, set: &BTreeSet<VertexId>, start: VertexId) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in instance.neighbors(v) {
            if set.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

fn connected(instance: &NodeWeightedInstance, set: &BTreeSet<VertexId>) -> bool {
    set.first().is_none_or(|&v| reach(instance, set, v).len() == set.len())
}

/// Recomputes the objective of `vertices` from scratch and checks the
/// constraints of `kind`. A `claimed` objective that differs is reported.
pub fn validate_solution(
    instance: &NodeWeightedInstance,
    vertices: &[VertexId],
    claimed: Option<&Rational>,
    kind: &ProblemKind,
) -> SolutionReport {
    let mut issues = Vec::new();
    let mut set: BTreeSet<VertexId> = BTreeSet::new();
    for &v in vertices {
        if v >= instance.len() {
            issues.push(format!("vertex id {v} out of range"));
        } else if !set.insert(v) {
            issues.push(format!("vertex {} listed twice", instance.name(v)));
        }
    }
    let cost = set.iter().fold(Rational::zero(), |acc, &v| acc + instance.cost(v));
    let prize = set.iter().fold(Rational::zero(), |acc, &v| acc + instance.prize(v));
    let require_tree = |issues: &mut Vec<String>, root: Option<VertexId>| {
        if !connected(instance, &set) {
            issues.push("vertex set is not connected".into());
        }
        if let Some(r) = root {
            if !set.contains(&r) {
                issues.push(format!("root {} missing", instance.name(r)));
            }
        }
    };
    let objective = match kind {
        ProblemKind::Pcsf => {
            let mut full = set.clone();
            full.extend(instance.terminals().into_iter().filter(|&t| instance.cost(t).is_zero()));
            instance.demands().iter().fold(cost.clone(), |acc, d| {
                if full.contains(&d.s) && reach(instance, &full, d.s).contains(&d.t) {
                    acc
                } else {
                    acc + &d.penalty
                }
            })
        }
        ProblemKind::Budgeted { root, budget } => {
            require_tree(&mut issues, *root);
            if &cost > budget {
                issues.push(format!("cost {cost} exceeds the budget {budget}"));
            }
            prize.clone()
        }
        ProblemKind::Cover(problem) => {
            require_tree(&mut issues, problem.root());
            let count = |c: u64| Rational::from_integer(c.into());
            let (weight, target) = match problem {
                CoverProblem::KMst { k, multiplicity, .. } => {
                    (count(set.iter().map(|&v| multiplicity.as_ref().map_or(1, |m| m[v])).sum()), count(*k))
                }
                CoverProblem::KSteiner { k, terminals, .. } => (count(set.iter().map(|&v| terminals[v]).sum()), count(*k)),
                CoverProblem::Quota { quota, .. } => (prize.clone(), quota.clone()),
            };
            if weight < target {
                issues.push(format!("covered weight {weight} is below the target {target}"));
            }
            cost.clone()
        }
        ProblemKind::NetWorth { root } => {
            require_tree(&mut issues, *root);
            &prize - &cost
        }
    };
    if let Some(c) = claimed {
        if c != &objective {
            issues.push(format!("claimed objective {c} differs from recomputed {objective}"));
        }
    }
    SolutionReport { valid: issues.is_empty(), issues, objective }
}
