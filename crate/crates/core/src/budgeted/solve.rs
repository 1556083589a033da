use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::tree::RootedTree;
use super::trim::{trim_rooted, trim_unrooted, TrimCase};
use super::{make_proper, ProperInstance, TreeClass};
use crate::error::{Error, Result};
use crate::graph::{normalize_demands, NodeWeightedInstance, VertexId};
use crate::oracle::{exact_budgeted, OracleBudget};
use crate::pcsf::{pcst_demands, solve_pcsf};
use crate::rational::{int, Rational};

/// How the tree of cost at most twice the budget is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Exhaustive maximum-prize tree; small instances only.
    #[default]
    Exact,
    /// Binary search on a prize multiplier around the prize-collecting solver.
    /// Heuristic: no approximation guarantee.
    Lagrangian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetedSolution {
    /// In the ids and weights of the input instance.
    pub tree: RootedTree,
    pub class: Option<TreeClass>,
    pub trim: Option<TrimCase>,
}

const LAGRANGIAN_STEPS: usize = 24;

/// A tree containing the root with cost at most twice the proper budget.
pub fn relaxed_budgeted_solve(proper: &ProperInstance, backend: Backend, oracle: &OracleBudget) -> Result<RootedTree> {
    let limit = &proper.budget * int(2);
    let graph = &proper.instance;
    match backend {
        Backend::Exact => {
            let (_, set) = exact_budgeted(graph, Some(proper.root), &limit, oracle)?;
            RootedTree::spanning(graph, proper.root, &set.into_iter().collect())
        }
        Backend::Lagrangian => {
            let root_only = RootedTree::spanning(graph, proper.root, &BTreeSet::from([proper.root]))?;
            let Some(min_prize) = (0..graph.len()).map(|v| graph.prize(v)).filter(|p| p.is_positive()).min().cloned() else {
                return Ok(root_only);
            };
            let mut best = root_only;
            let mut lo = Rational::zero();
            let mut hi = (graph.total_cost() + int(1)) / min_prize;
            for _ in 0..LAGRANGIAN_STEPS {
                let lambda = (&lo + &hi) / int(2);
                let tree = pcst_tree(graph, proper.root, &lambda)?;
                if tree.cost <= limit {
                    if tree.prize > best.prize || (tree.prize == best.prize && tree.cost < best.cost) {
                        best = tree;
                    }
                    lo = lambda;
                } else {
                    hi = lambda;
                }
            }
            Ok(best)
        }
    }
}

/// The root's component in the prize-collecting solution with penalties `λ·prize`.
fn pcst_tree(graph: &NodeWeightedInstance, root: VertexId, lambda: &Rational) -> Result<RootedTree> {
    let scaled: Vec<Rational> = (0..graph.len()).map(|v| graph.prize(v) * lambda).collect();
    let penalized = pcst_demands(&graph.with_weights(None, Some(scaled))?, root)?;
    let normalized = normalize_demands(&penalized);
    let (solution, _) = solve_pcsf(&normalized)?;
    let mut member: Vec<bool> = (0..graph.len()).map(|v| graph.cost(v).is_zero()).collect();
    for &v in solution.bought.iter().filter(|&&v| v < graph.len()) {
        member[v] = true;
    }
    member[root] = true;
    let component = graph
        .components_within(&member)
        .into_iter()
        .find(|c| c.contains(&root))
        .expect("the root is a member");
    RootedTree::spanning(graph, root, &component.into_iter().collect())
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() || epsilon > &int(1) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    Ok(())
}

/// Rooted budgeted tree of cost at most `(1+ε)B`.
pub fn solve_rooted_budgeted(
    instance: &NodeWeightedInstance,
    root: VertexId,
    budget: &Rational,
    epsilon: &Rational,
    backend: Backend,
    oracle: &OracleBudget,
) -> Result<BudgetedSolution> {
    check_epsilon(epsilon)?;
    let proper = make_proper(instance, root, budget)?;
    let relaxed = relaxed_budgeted_solve(&proper, backend, oracle)?;
    let (tree, trim) = if relaxed.cost <= (int(1) + epsilon) * budget {
        (relaxed, None)
    } else {
        let gamma = &relaxed.prize / &relaxed.cost;
        let trimmed = trim_rooted(&relaxed, &proper, &gamma, epsilon)?;
        (trimmed.tree, Some(trimmed.case))
    };
    Ok(BudgetedSolution { tree: tree.relabeled(&proper.original_ids), class: None, trim })
}

/// Best tree of cost at most `budget` (in the graph's own costs) containing
/// `guess`: relaxed solve at twice the budget, then unrooted trimming.
fn flat_guess(graph: &NodeWeightedInstance, guess: VertexId, budget: &Rational, backend: Backend, oracle: &OracleBudget) -> Result<(RootedTree, Option<TrimCase>)> {
    let proper = make_proper(graph, guess, budget)?;
    let relaxed = relaxed_budgeted_solve(&proper, backend, oracle)?;
    let (tree, case) = if &relaxed.cost <= budget {
        (relaxed, None)
    } else if !relaxed.prize.is_positive() {
        (RootedTree::spanning(&proper.instance, proper.root, &BTreeSet::from([proper.root]))?, None)
    } else {
        let trimmed = trim_unrooted(&relaxed, budget)?;
        (trimmed.tree, Some(trimmed.case))
    };
    Ok((tree.relabeled(&proper.original_ids), case))
}

struct Guess {
    class: TreeClass,
    /// Vertex of the source instance the search is anchored at.
    anchor: VertexId,
}

/// Unrooted budgeted tree that never exceeds `budget`: the best of a flat
/// search (vertices above B/2 removed) and a saddled search per expensive apex.
pub fn solve_unrooted_budgeted(
    instance: &NodeWeightedInstance,
    budget: &Rational,
    backend: Backend,
    oracle: &OracleBudget,
) -> Result<BudgetedSolution> {
    if budget.is_negative() || (0..instance.len()).all(|v| instance.cost(v) > budget) {
        return Err(Error::Infeasible(format!("no single vertex fits the budget {budget}")));
    }
    let half = budget / int(2);
    let mut guesses = Vec::new();
    for v in 0..instance.len() {
        let c = instance.cost(v);
        if c <= &half {
            guesses.push(Guess { class: TreeClass::Flat, anchor: v });
        } else if c <= budget {
            guesses.push(Guess { class: TreeClass::Saddled { apex: v }, anchor: v });
        }
    }
    let flat_keep: Vec<bool> = (0..instance.len()).map(|v| instance.cost(v) <= &half).collect();
    let (flat_graph, flat_ids) = instance.induced(&flat_keep);
    let results: Vec<Result<(RootedTree, Option<TrimCase>)>> = guesses
        .par_iter()
        .map(|g| match g.class {
            TreeClass::Flat => {
                let local = flat_ids.binary_search(&g.anchor).expect("flat guesses are kept");
                let (tree, case) = flat_guess(&flat_graph, local, budget, backend, oracle)?;
                Ok((tree.relabeled(&flat_ids), case))
            }
            TreeClass::Saddled { apex } => {
                let rest = budget - instance.cost(apex);
                let half_rest = &rest / int(2);
                let mut costs: Vec<Rational> = (0..instance.len()).map(|v| instance.cost(v).clone()).collect();
                costs[apex] = Rational::zero();
                let keep: Vec<bool> = (0..instance.len()).map(|v| v == apex || instance.cost(v) <= &half_rest).collect();
                let (graph, ids) = instance.with_weights(Some(costs), None)?.induced(&keep);
                let local = ids.binary_search(&apex).expect("apex is kept");
                let (tree, case) = flat_guess(&graph, local, &rest, backend, oracle)?;
                Ok((tree.relabeled(&ids).reweighted(instance), case))
            }
        })
        .collect();
    let mut best: Option<BudgetedSolution> = None;
    for (guess, result) in guesses.iter().zip(results) {
        let (tree, trim) = result?;
        debug_assert!(&tree.cost <= budget);
        let better = best
            .as_ref()
            .is_none_or(|b| tree.prize > b.tree.prize || (tree.prize == b.tree.prize && tree.cost < b.tree.cost));
        if better {
            best = Some(BudgetedSolution { tree, class: Some(guess.class), trim });
        }
    }
    Ok(best.expect("at least one vertex fits the budget"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;
    use crate::rational::ratio;

    fn graph(costs: &[Rational], prizes: &[i64], edges: &[(usize, usize)]) -> NodeWeightedInstance {
        let vertices = costs
            .iter()
            .zip(prizes)
            .enumerate()
            .map(|(i, (c, &p))| Vertex { name: format!("v{i}"), cost: c.clone(), prize: int(p) })
            .collect();
        NodeWeightedInstance::new(vertices, edges.to_vec(), vec![], None, None).unwrap()
    }

    #[test]
    fn single_vertex_graph() {
        let g = graph(&[int(1)], &[3], &[]);
        let sol = solve_rooted_budgeted(&g, 0, &int(1), &int(1), Backend::Exact, &OracleBudget::default()).unwrap();
        assert_eq!(sol.tree.vertices(), BTreeSet::from([0]));
        let sol = solve_unrooted_budgeted(&g, &int(1), Backend::Exact, &OracleBudget::default()).unwrap();
        assert_eq!(sol.tree.prize, int(3));
    }

    #[test]
    fn saddled_search_finds_the_expensive_pair() {
        // costs 0.6B and 0.2B on an edge, B = 10
        let g = graph(&[int(6), int(2)], &[5, 5], &[(0, 1)]);
        let sol = solve_unrooted_budgeted(&g, &int(10), Backend::Exact, &OracleBudget::default()).unwrap();
        assert_eq!(sol.tree.prize, int(10));
        assert_eq!(sol.class, Some(TreeClass::Saddled { apex: 0 }));
        assert_eq!(sol.tree.cost, int(8));
        // 6 + 3 fits the budget but is neither flat nor saddled
        let g = graph(&[int(6), int(3)], &[5, 5], &[(0, 1)]);
        let sol = solve_unrooted_budgeted(&g, &int(10), Backend::Exact, &OracleBudget::default()).unwrap();
        assert_eq!(sol.tree.prize, int(5));
    }

    #[test]
    fn unrooted_reports_infeasibility() {
        let g = graph(&[int(6)], &[1], &[]);
        assert!(matches!(solve_unrooted_budgeted(&g, &int(5), Backend::Exact, &OracleBudget::default()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn lagrangian_respects_twice_the_budget() {
        let g = graph(&[int(0), int(2), int(2), int(5)], &[0, 3, 3, 9], &[(0, 1), (1, 2), (0, 3)]);
        let proper = make_proper(&g, 0, &int(4)).unwrap();
        let tree = relaxed_budgeted_solve(&proper, Backend::Lagrangian, &OracleBudget::default()).unwrap();
        assert!(tree.cost <= int(8));
        assert!(tree.prize >= int(6));
        let sol = solve_rooted_budgeted(&g, 0, &int(4), &ratio(1, 2), Backend::Lagrangian, &OracleBudget::default()).unwrap();
        assert!(sol.tree.cost <= int(6));
    }
}
