//! Trimming a tree of good prize-to-cost ratio down to a cost window while
//! losing at most a constant factor of the ratio.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::tree::{ratio_at_least, RootedTree};
use super::ProperInstance;
use crate::error::{Error, Result};
use crate::graph::{shortest_paths, CostFunction, VertexId};
use crate::rational::{int, Rational};

/// Which branch of the construction produced the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrimCase {
    /// Pruning alone brought the cost into range.
    Pruned,
    /// A lowest rich subtree with light children, taken whole.
    RichWhole,
    /// Children of a lowest rich subtree picked to fill the window.
    RichSelection,
    /// Children of a lowest low-ratio subtree picked to fill the window.
    LowRatioSelection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trimmed {
    pub tree: RootedTree,
    pub case: TrimCase,
}

struct Sums {
    cost: BTreeMap<VertexId, Rational>,
    prize: BTreeMap<VertexId, Rational>,
    /// Every subtree below and including `v` has ratio at least gamma.
    all_good: BTreeMap<VertexId, bool>,
}

fn subtree_sums(tree: &RootedTree, gamma: &Rational) -> Sums {
    let children = tree.children();
    let mut sums = Sums { cost: BTreeMap::new(), prize: BTreeMap::new(), all_good: BTreeMap::new() };
    for &v in tree.preorder().iter().rev() {
        let mut c = tree.vertex_cost[&v].clone();
        let mut p = tree.vertex_prize[&v].clone();
        let mut good = true;
        for w in &children[&v] {
            c += &sums.cost[w];
            p += &sums.prize[w];
            good &= sums.all_good[w];
        }
        good &= ratio_at_least(&p, &c, gamma);
        sums.cost.insert(v, c);
        sums.prize.insert(v, p);
        sums.all_good.insert(v, good);
    }
    sums
}

/// Repeatedly removes the first subtree (in preorder) whose removal keeps the
/// remaining ratio at least `gamma` and the remaining cost at least `floor`.
pub fn prune(tree: &RootedTree, gamma: &Rational, floor: &Rational) -> RootedTree {
    let mut current = tree.clone();
    'outer: loop {
        let sums = subtree_sums(&current, gamma);
        let (total_c, total_p) = (&sums.cost[&current.root], &sums.prize[&current.root]);
        for v in current.preorder().into_iter().skip(1) {
            let rest_c = total_c - &sums.cost[&v];
            let rest_p = total_p - &sums.prize[&v];
            if &rest_c >= floor && ratio_at_least(&rest_p, &rest_c, gamma) {
                let drop = current.subtree(v);
                let keep: BTreeSet<VertexId> = current.vertices().difference(&drop).copied().collect();
                current = current.restrict(current.root, &keep).expect("removing a subtree keeps a tree");
                continue 'outer;
            }
        }
        return current;
    }
}

/// Greedy prefix by descending cost (ties by id) until the total reaches
/// `lower`. With every item below `lower` and enough total, the result lies in
/// `[lower, 2 * lower)`.
pub fn select_prefix(items: &[(VertexId, Rational)], lower: &Rational) -> (Vec<VertexId>, Rational) {
    let mut sorted: Vec<&(VertexId, Rational)> = items.iter().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut chosen = Vec::new();
    let mut total = Rational::zero();
    for (v, c) in sorted {
        if &total >= lower {
            break;
        }
        chosen.push(*v);
        total += c;
    }
    (chosen, total)
}

/// Lowest subtree whose cost reaches `threshold` and whose subtrees all have
/// ratio at least gamma, descending through heavy children.
fn lowest_rich(tree: &RootedTree, sums: &Sums, threshold: &Rational) -> Option<VertexId> {
    let children = tree.children();
    let mut v = tree.preorder().into_iter().find(|v| sums.all_good[v] && &sums.cost[v] >= threshold)?;
    while let Some(&w) = children[&v].iter().find(|w| &sums.cost[*w] >= threshold) {
        v = w;
    }
    Some(v)
}

/// A subtree of ratio below gamma all of whose strict subtrees have ratio at least gamma.
fn lowest_poor(tree: &RootedTree, sums: &Sums, gamma: &Rational) -> Option<VertexId> {
    let children = tree.children();
    tree.preorder()
        .into_iter()
        .rev()
        .find(|v| !ratio_at_least(&sums.prize[v], &sums.cost[v], gamma) && children[v].iter().all(|w| sums.all_good[w]))
}

fn child_items(tree: &RootedTree, sums: &Sums, v: VertexId) -> Vec<(VertexId, Rational)> {
    tree.children()[&v].iter().map(|&w| (w, sums.cost[&w].clone())).collect()
}

fn union_of_subtrees(tree: &RootedTree, top: VertexId, chosen: &[VertexId]) -> BTreeSet<VertexId> {
    let mut set = BTreeSet::from([top]);
    for &w in chosen {
        set.extend(tree.subtree(w));
    }
    set
}

/// Rooted trimming: returns a tree containing the root with
/// `εB/2 <= cost <= (1+ε)B` and ratio at least `εγ/4`, attaching the kept part
/// to the root through a shortest path of the proper graph when needed.
pub fn trim_rooted(tree: &RootedTree, proper: &ProperInstance, gamma: &Rational, epsilon: &Rational) -> Result<Trimmed> {
    let budget = &proper.budget;
    if !epsilon.is_positive() || epsilon > &int(1) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if gamma.is_negative() {
        return Err(Error::Precondition("gamma must be nonnegative".into()));
    }
    if tree.root != proper.root {
        return Err(Error::Precondition("the tree must be rooted at the proper instance's root".into()));
    }
    let graph = &proper.instance;
    for (&v, c) in &tree.vertex_cost {
        if v >= graph.len() || graph.cost(v) != c || graph.prize(v) != &tree.vertex_prize[&v] {
            return Err(Error::Precondition(format!("tree vertex {v} does not match the graph")));
        }
    }
    if tree.edges().iter().any(|&(u, v)| !graph.neighbors(u).contains(&v)) {
        return Err(Error::Precondition("tree edge missing from the graph".into()));
    }
    if !ratio_at_least(&tree.prize, &tree.cost, gamma) {
        return Err(Error::Precondition(format!("tree ratio is below gamma = {gamma}")));
    }
    let floor = epsilon * budget / int(2);
    if tree.cost < floor {
        return Err(Error::Precondition(format!("tree cost {} is below εB/2 = {floor}", tree.cost)));
    }
    let dist = shortest_paths(graph, &CostFunction::base(graph), &[proper.root])?;
    if (0..graph.len()).any(|v| dist.get(v).finite().is_none_or(|d| d > budget)) {
        return Err(Error::Precondition("graph is not proper for the root and budget".into()));
    }

    let ceiling = (int(1) + epsilon) * budget;
    let pruned = prune(tree, gamma, &floor);
    if pruned.cost <= ceiling {
        return Ok(Trimmed { tree: pruned, case: TrimCase::Pruned });
    }
    let sums = subtree_sums(&pruned, gamma);
    let (top, keep, case) = if let Some(top) = lowest_rich(&pruned, &sums, &floor) {
        let items = child_items(&pruned, &sums, top);
        let light = items.iter().fold(Rational::zero(), |a, (_, c)| a + c);
        if light < floor {
            (top, pruned.subtree(top), TrimCase::RichWhole)
        } else {
            let (chosen, _) = select_prefix(&items, &floor);
            (top, union_of_subtrees(&pruned, top, &chosen), TrimCase::RichSelection)
        }
    } else {
        let top = lowest_poor(&pruned, &sums, gamma).expect("a tree without rich subtrees has a poor one");
        let (chosen, _) = select_prefix(&child_items(&pruned, &sums, top), &floor);
        (top, union_of_subtrees(&pruned, top, &chosen), TrimCase::LowRatioSelection)
    };
    let mut set = keep;
    set.extend(dist.path_to_source(top));
    let out = RootedTree::spanning(graph, proper.root, &set)?;
    let min_ratio = epsilon * gamma / int(4);
    if out.cost < floor || out.cost > ceiling || !ratio_at_least(&out.prize, &out.cost, &min_ratio) {
        return Err(Error::Precondition(format!("rooted trimming left its window: cost {}, prize {}", out.cost, out.prize)));
    }
    Ok(Trimmed { tree: out, case })
}

/// Unrooted trimming: returns a subtree with `B/4 <= cost <= B` and ratio at
/// least a quarter of the input ratio. Pure tree surgery.
pub fn trim_unrooted(tree: &RootedTree, budget: &Rational) -> Result<Trimmed> {
    if budget.is_negative() {
        return Err(Error::Precondition("budget must be nonnegative".into()));
    }
    let half = budget / int(2);
    let quarter = budget / int(4);
    if tree.cost < half {
        return Err(Error::Precondition(format!("tree cost {} is below B/2 = {half}", tree.cost)));
    }
    if let Some((v, c)) = tree.vertex_cost.iter().find(|(_, c)| **c > half) {
        return Err(Error::Precondition(format!("vertex {v} costs {c}, more than B/2")));
    }
    if &tree.cost <= budget {
        return Ok(Trimmed { tree: tree.clone(), case: TrimCase::Pruned });
    }
    if !tree.prize.is_positive() {
        return Err(Error::Precondition("tree ratio must be positive".into()));
    }
    let gamma = &tree.prize / &tree.cost;
    let pruned = prune(tree, &gamma, &quarter);
    if &pruned.cost <= budget {
        return Ok(Trimmed { tree: pruned, case: TrimCase::Pruned });
    }
    let sums = subtree_sums(&pruned, &gamma);
    let (top, keep, case) = if let Some(top) = lowest_rich(&pruned, &sums, &quarter) {
        let items = child_items(&pruned, &sums, top);
        let light = items.iter().fold(Rational::zero(), |a, (_, c)| a + c);
        if light < quarter {
            (top, pruned.subtree(top), TrimCase::RichWhole)
        } else {
            let (chosen, _) = select_prefix(&items, &quarter);
            (top, union_of_subtrees(&pruned, top, &chosen), TrimCase::RichSelection)
        }
    } else {
        let top = lowest_poor(&pruned, &sums, &gamma).expect("a tree without rich subtrees has a poor one");
        let (chosen, _) = select_prefix(&child_items(&pruned, &sums, top), &quarter);
        (top, union_of_subtrees(&pruned, top, &chosen), TrimCase::LowRatioSelection)
    };
    let out = pruned.restrict(top, &keep)?;
    let min_ratio = &gamma / int(4);
    if out.cost < quarter || &out.cost > budget || !ratio_at_least(&out.prize, &out.cost, &min_ratio) {
        return Err(Error::Precondition(format!("unrooted trimming left its window: cost {}, prize {}", out.cost, out.prize)));
    }
    Ok(Trimmed { tree: out, case })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budgeted::make_proper;
    use crate::graph::{NodeWeightedInstance, Vertex};
    use crate::rational::ratio;

    fn weighted(links: &[(usize, usize)], costs: &[Rational], prizes: &[Rational]) -> RootedTree {
        let parent = links.iter().copied().collect();
        let w = |xs: &[Rational]| xs.iter().cloned().enumerate().collect();
        RootedTree::new(0, parent, w(costs), w(prizes)).unwrap()
    }

    #[test]
    fn prefix_lands_in_window() {
        let items: Vec<(VertexId, Rational)> = vec![(1, int(2)), (2, int(3)), (3, int(1)), (4, int(3))];
        let (chosen, total) = select_prefix(&items, &int(4));
        assert_eq!(chosen, vec![2, 4]);
        assert_eq!(total, int(6));
    }

    #[test]
    fn unrooted_whole_tree_when_within_budget() {
        // cost exactly B/2 with B = 8
        let t = weighted(&[(1, 0), (2, 1)], &[int(1), int(2), int(1)], &[int(1), int(2), int(1)]);
        let out = trim_unrooted(&t, &int(8)).unwrap();
        assert_eq!(out.tree, t);
    }

    #[test]
    fn unrooted_path_of_quarters() {
        // four vertices of cost B/4, uniform prize
        let q = int(1);
        let t = weighted(&[(1, 0), (2, 1), (3, 2)], &vec![q.clone(); 4], &vec![int(5); 4]);
        let out = trim_unrooted(&t, &int(4)).unwrap();
        assert!(out.tree.cost >= int(1) && out.tree.cost <= int(4));
        let t2 = weighted(&[(1, 0), (2, 1), (3, 2), (4, 3)], &vec![q; 5], &vec![int(5); 5]);
        let out = trim_unrooted(&t2, &int(4)).unwrap();
        assert!(out.tree.cost >= int(1) && out.tree.cost <= int(4));
        assert!(!out.tree.is_empty() && out.tree.len() <= 4);
    }

    #[test]
    fn unrooted_rejects_heavy_vertices() {
        let t = weighted(&[(1, 0)], &[int(3), int(1)], &[int(1), int(1)]);
        assert!(trim_unrooted(&t, &int(4)).is_err());
    }

    fn star(leaves: usize, leaf_cost: Rational) -> NodeWeightedInstance {
        let mut vertices = vec![Vertex { name: "r".into(), cost: int(0), prize: int(0) }];
        vertices.extend((0..leaves).map(|i| Vertex { name: format!("l{i}"), cost: leaf_cost.clone(), prize: leaf_cost.clone() }));
        let edges = (1..=leaves).map(|i| (0, i)).collect();
        NodeWeightedInstance::new(vertices, edges, vec![], None, None).unwrap()
    }

    #[test]
    fn rooted_star_keeps_some_leaves() {
        // B = 4, ε = 1/2: each leaf costs εB/2 = 1 and has ratio 1
        let g = star(10, int(1));
        let proper = make_proper(&g, 0, &int(4)).unwrap();
        let all: BTreeSet<VertexId> = (0..11).collect();
        let t = RootedTree::spanning(&proper.instance, 0, &all).unwrap();
        let out = trim_rooted(&t, &proper, &int(1), &ratio(1, 2)).unwrap();
        assert!(out.tree.cost >= int(1) && out.tree.cost <= int(6));
        assert!(out.tree.vertices().contains(&0));
        assert!(out.tree.prize >= out.tree.cost * ratio(1, 8));
    }

    #[test]
    fn rooted_low_ratio_branch() {
        // r (prize 8) - v (cost 8, no prize) - six leaves of cost 2 and prize 4.
        // No leaf can go (ratio 2 > γ = 8/5) and v's subtree carries the cost floor.
        let mut vertices = vec![
            Vertex { name: "r".into(), cost: int(0), prize: int(8) },
            Vertex { name: "v".into(), cost: int(8), prize: int(0) },
        ];
        vertices.extend((0..6).map(|i| Vertex { name: format!("l{i}"), cost: int(2), prize: int(4) }));
        let edges = std::iter::once((0, 1)).chain((2..8).map(|l| (1, l))).collect();
        let g = NodeWeightedInstance::new(vertices, edges, vec![], None, None).unwrap();
        let proper = make_proper(&g, 0, &int(10)).unwrap();
        let t = RootedTree::spanning(&proper.instance, 0, &(0..8).collect()).unwrap();
        let out = trim_rooted(&t, &proper, &ratio(8, 5), &ratio(1, 2)).unwrap();
        assert_eq!(out.case, TrimCase::LowRatioSelection);
        assert_eq!(out.tree.vertices(), BTreeSet::from([0, 1, 2, 3]));
        assert_eq!((out.tree.cost, out.tree.prize), (int(12), int(16)));
    }

    #[test]
    fn rooted_reports_bad_ratio() {
        let g = star(3, int(1));
        let proper = make_proper(&g, 0, &int(4)).unwrap();
        let t = RootedTree::spanning(&proper.instance, 0, &(0..4).collect()).unwrap();
        assert!(trim_rooted(&t, &proper, &int(2), &int(1)).is_err());
    }
}
