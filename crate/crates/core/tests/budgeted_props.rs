mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use proptest::prelude::*;

use nwsteiner::budgeted::{
    make_proper, select_prefix, solve_rooted_budgeted, solve_unrooted_budgeted, split_unclassified, trim_rooted, trim_unrooted, Backend, RootedTree,
    TreeClass,
};
use nwsteiner::oracle::OracleBudget;
use nwsteiner::rational::{int, ratio, Rational};
use nwsteiner::Error;

/// Random parent links over `0..n` with vertex 0 as the root.
fn random_tree(parents: &[usize], costs: &[i64], prizes: &[i64]) -> RootedTree {
    let n = costs.len();
    let parent: BTreeMap<usize, usize> = (1..n).map(|v| (v, parents[v - 1] % v)).collect();
    let w = |xs: &[i64]| xs.iter().enumerate().map(|(v, &x)| (v, int(x))).collect::<BTreeMap<_, _>>();
    RootedTree::new(0, parent, w(costs), w(&prizes[..n])).unwrap()
}

fn is_subtree_of(part: &RootedTree, whole: &RootedTree) -> bool {
    let inside = part.vertices().is_subset(&whole.vertices());
    let linked = part.edges().iter().all(|&(p, v)| whole.parent.get(&v) == Some(&p) || whole.parent.get(&p) == Some(&v));
    inside && linked && part.edges().len() + 1 == part.len()
}

fn tree_case() -> impl Strategy<Value = (Vec<usize>, Vec<i64>, Vec<i64>)> {
    (2usize..30).prop_flat_map(|n| (prop::collection::vec(any::<usize>(), n - 1), prop::collection::vec(0i64..8, n), prop::collection::vec(0i64..12, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn unrooted_trim_stays_in_window((parents, costs, prizes) in tree_case(), shrink in 1i64..4) {
        let tree = random_tree(&parents, &costs, &prizes);
        let max = costs.iter().copied().max().unwrap();
        let total: i64 = costs.iter().sum();
        // any budget with every vertex at most B/2 and the tree at least B/2
        let budget = int((2 * max).max(total / shrink).min(2 * total));
        prop_assume!(tree.prize > Rational::zero() && budget > Rational::zero() && &tree.cost * int(2) >= budget);
        let out = trim_unrooted(&tree, &budget).unwrap();
        prop_assert!(is_subtree_of(&out.tree, &tree));
        prop_assert!(out.tree.cost <= budget && out.tree.cost >= &budget / int(4));
        if tree.cost > budget {
            prop_assert!(out.tree.prize * int(4) * &tree.cost >= tree.prize * &out.tree.cost);
        }
    }

    #[test]
    fn rooted_trim_stays_in_window(seed in any::<u64>(), n in 2usize..14, eps_den in 1i64..5, slack in 0i64..4) {
        let g = common::instance(seed, n, 0, true);
        let far = (0..n).map(|v| nwsteiner::graph::shortest_paths(&g, &nwsteiner::graph::CostFunction::base(&g), &[0]).unwrap().get(v).finite().unwrap().clone()).max().unwrap();
        let budget = far + int(slack);
        prop_assume!(budget > Rational::zero());
        let proper = make_proper(&g, 0, &budget).unwrap();
        let tree = RootedTree::spanning(&proper.instance, 0, &(0..proper.instance.len()).collect()).unwrap();
        let eps = ratio(1, eps_den);
        prop_assume!(!tree.cost.is_zero() && tree.cost >= &eps * &budget / int(2));
        let gamma = &tree.prize / &tree.cost;
        let out = trim_rooted(&tree, &proper, &gamma, &eps).unwrap();
        prop_assert!(out.tree.vertices().contains(&0));
        prop_assert!(proper.instance.is_connected_set(&out.tree.vertices().into_iter().collect::<Vec<_>>()));
        prop_assert!(out.tree.cost >= &eps * &budget / int(2));
        prop_assert!(out.tree.cost <= (int(1) + &eps) * &budget);
        prop_assert!(out.tree.prize * int(4) >= &eps * &gamma * &out.tree.cost);
    }

    #[test]
    fn unclassified_trees_split_into_flat_and_saddled(
        (parents, mut costs, prizes) in tree_case(),
        heavy in 51i64..95,
        second_share in 1i64..100,
    ) {
        let budget = int(100);
        let rest = 100 - heavy;
        // second vertex in ((B - heavy)/2, B - heavy], the others share what is left
        let second = rest / 2 + 1 + (second_share % (rest - rest / 2)).max(0);
        prop_assume!(second <= rest);
        let mut left = rest - second;
        costs[0] = heavy;
        costs[1] = second;
        for c in costs.iter_mut().skip(2) {
            *c = (*c).min(left).min((rest) / 2);
            left -= *c;
        }
        let tree = random_tree(&parents, &costs, &prizes);
        prop_assert!(tree.cost <= budget);
        prop_assert_eq!(TreeClass::of_tree(&tree, &budget), None);
        let (flat, saddled) = split_unclassified(&tree).unwrap();
        prop_assert_eq!(TreeClass::of_tree(&flat, &budget), Some(TreeClass::Flat));
        prop_assert_eq!(TreeClass::of_tree(&saddled, &budget), Some(TreeClass::Saddled { apex: 0 }));
        let union: BTreeSet<usize> = flat.vertices().union(&saddled.vertices()).copied().collect();
        prop_assert_eq!(union, tree.vertices());
        prop_assert!(flat.vertices().is_disjoint(&saddled.vertices()));
        prop_assert!(flat.prize.clone().max(saddled.prize.clone()) * int(2) >= tree.prize);
    }

    #[test]
    fn greedy_prefix_lands_in_the_interval(costs in prop::collection::vec(1i64..20, 1..30), lower_pct in 0i64..=100) {
        let upper_item = *costs.iter().max().unwrap();
        let total: i64 = costs.iter().sum();
        // any L with U <= L <= total
        let lower = upper_item + (total - upper_item) * lower_pct / 100;
        let items: Vec<(usize, Rational)> = costs.iter().enumerate().map(|(i, &c)| (i, int(c))).collect();
        let (chosen, sum) = select_prefix(&items, &int(lower));
        prop_assert!(sum >= int(lower) && sum <= int(lower + upper_item));
        prop_assert_eq!(sum, chosen.iter().map(|&i| int(costs[i])).fold(Rational::zero(), |a, b| a + b));
    }

    #[test]
    fn budgeted_solvers_respect_their_budgets(seed in any::<u64>(), n in 1usize..9, budget in 0i64..12, eps_den in 1i64..5) {
        let g = common::instance(seed, n, 0, seed % 4 != 0);
        let b = int(budget);
        let oracle = OracleBudget::default();
        match solve_unrooted_budgeted(&g, &b, Backend::Exact, &oracle) {
            Ok(sol) => prop_assert!(sol.tree.cost <= b),
            Err(Error::Infeasible(_)) => prop_assert!((0..n).all(|v| g.cost(v) > &b)),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        let eps = ratio(1, eps_den);
        match solve_rooted_budgeted(&g, 0, &b, &eps, Backend::Exact, &oracle) {
            Ok(sol) => {
                prop_assert!(sol.tree.vertices().contains(&0));
                prop_assert!(sol.tree.cost <= (int(1) + eps) * &b);
            }
            Err(Error::Infeasible(_)) => prop_assert!(g.cost(0) > &b),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
