//! Budgeted node-weighted Steiner tree: trimming, the rooted bicriteria
//! algorithm and the unrooted algorithm that never exceeds the budget.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{shortest_paths, CostFunction, NodeWeightedInstance, VertexId};
use crate::rational::{int, Rational};

mod solve;
mod tree;
mod trim;

pub use solve::{relaxed_budgeted_solve, solve_rooted_budgeted, solve_unrooted_budgeted, Backend, BudgetedSolution};
pub use tree::{ratio_at_least, RootedTree};
pub use trim::{prune, select_prefix, trim_rooted, trim_unrooted, TrimCase, Trimmed};

/// The subgraph of vertices within node-weighted distance `budget` of `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperInstance {
    pub instance: NodeWeightedInstance,
    pub root: VertexId,
    pub budget: Rational,
    /// Id in the source instance of every vertex kept.
    pub original_ids: Vec<VertexId>,
}

pub fn make_proper(instance: &NodeWeightedInstance, root: VertexId, budget: &Rational) -> Result<ProperInstance> {
    if root >= instance.len() {
        return Err(Error::Precondition(format!("root {root} does not exist")));
    }
    if instance.cost(root) > budget {
        return Err(Error::Infeasible(format!("the root alone costs {} > {budget}", instance.cost(root))));
    }
    let dist = shortest_paths(instance, &CostFunction::base(instance), &[root])?;
    let keep: Vec<bool> = (0..instance.len()).map(|v| dist.get(v).finite().is_some_and(|d| d <= budget)).collect();
    let (sub, original_ids) = instance.induced(&keep);
    let root = original_ids.binary_search(&root).expect("root is kept");
    let sub = sub.with_root(Some(root))?.with_budget(Some(budget.clone()))?;
    Ok(ProperInstance { instance: sub, root, budget: budget.clone(), original_ids })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeClass {
    /// Every vertex costs at most B/2.
    Flat,
    /// One vertex costs more than B/2, every other at most (B - c(apex))/2.
    Saddled { apex: VertexId },
}

impl TreeClass {
    /// Class of a vertex set under costs `cost`, if any.
    pub fn of(costs: &[(VertexId, Rational)], budget: &Rational) -> Option<Self> {
        let half = budget / int(2);
        let heaviest = costs.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
        if heaviest.1 <= half {
            return Some(TreeClass::Flat);
        }
        let rest = (budget - &heaviest.1) / int(2);
        costs
            .iter()
            .filter(|(v, _)| *v != heaviest.0)
            .all(|(_, c)| c <= &rest)
            .then_some(TreeClass::Saddled { apex: heaviest.0 })
    }

    pub fn of_tree(tree: &RootedTree, budget: &Rational) -> Option<Self> {
        let costs: Vec<(VertexId, Rational)> = tree.vertex_cost.iter().map(|(&v, c)| (v, c.clone())).collect();
        Self::of(&costs, budget)
    }
}

/// For a tree of cost at most `budget` with at least two vertices that is
/// neither flat nor saddled: cut the edge next to the second most expensive
/// vertex on its path to the most expensive one. Returns the parts containing
/// the second most expensive and the most expensive vertex; the first is flat
/// and the second saddled.
pub fn split_unclassified(tree: &RootedTree) -> Option<(RootedTree, RootedTree)> {
    if tree.len() < 2 {
        return None;
    }
    let mut by_cost: Vec<(VertexId, &Rational)> = tree.vertex_cost.iter().map(|(&v, c)| (v, c)).collect();
    by_cost.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(&b.0)));
    let (x, y) = (by_cost[0].0, by_cost[1].0);
    let rooted = tree.rerooted(x).ok()?;
    // the edge next to y on its path to x is the edge to y's parent
    let y_side = rooted.subtree(y);
    let x_side: BTreeSet<VertexId> = rooted.vertices().difference(&y_side).copied().collect();
    Some((rooted.restrict(y, &y_side).ok()?, rooted.restrict(x, &x_side).ok()?))
}
