mod common;

use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;

use nwsteiner::graph::normalize_demands;
use nwsteiner::oracle::{validate_solution, ProblemKind};
use nwsteiner::pcsf::{build_iteration, solve_pcsf_traced};
use nwsteiner::rational::{ratio, Rational};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iterations_shrink_and_stay_within_2h(seed in any::<u64>(), n in 2usize..10, h in 1usize..4, connected in any::<bool>()) {
        let g = normalize_demands(&common::instance(seed, n, h, connected));
        let (solution, cert, trace) = solve_pcsf_traced(&g).unwrap();
        prop_assert!(trace.len() <= 2 * h);
        prop_assert_eq!(trace.len(), cert.rounds.len());
        prop_assert!(cert.check().is_ok());
        prop_assert!(cert.total_payment() >= solution.objective);
        for pair in trace.windows(2) {
            let before: BTreeSet<_> = pair[0].bought.iter().collect();
            let after: BTreeSet<_> = pair[1].bought.iter().collect();
            prop_assert!(before.is_subset(&after));
            prop_assert!(pair[1].active.is_subset(&pair[0].active));
        }
        let report = validate_solution(&g, &solution.bought, Some(&solution.objective), &ProblemKind::Pcsf);
        prop_assert!(report.valid, "{:?}", report.issues);
    }

    #[test]
    fn event_radius_is_the_feasibility_limit(seed in any::<u64>(), n in 2usize..9, h in 1usize..4) {
        let g = normalize_demands(&common::instance(seed, n, h, true));
        let (_, _, trace) = solve_pcsf_traced(&g).unwrap();
        let delta = ratio(1, 1000);
        for it in &trace {
            let sys = build_iteration(&g, &it.bought, &it.active).unwrap();
            prop_assert!(sys.verify_dual_feasibility(&it.event.radius));
            prop_assert!(!sys.verify_dual_feasibility(&(&it.event.radius + &delta)));
        }
    }

    #[test]
    fn feasible_disks_do_not_overlap_inside(seed in any::<u64>(), n in 2usize..9, h in 1usize..4, step in 1i64..8) {
        let g = normalize_demands(&common::instance(seed, n, h, true));
        let (_, _, trace) = solve_pcsf_traced(&g).unwrap();
        for it in &trace {
            let sys = build_iteration(&g, &it.bought, &it.active).unwrap();
            // a radius strictly below the event, where the disks are still feasible
            let radius: Rational = &it.event.radius * ratio(step, 8);
            if !sys.verify_dual_feasibility(&radius) {
                continue;
            }
            for v in 0..g.len() {
                let inside = sys.dist.iter().filter(|d| d.get(v).finite().is_some_and(|x| x < &radius)).count();
                prop_assert!(inside <= 1, "vertex {} strictly inside {} disks", v, inside);
            }
        }
    }

    #[test]
    fn zero_penalty_demands_cost_nothing(seed in any::<u64>(), n in 2usize..8) {
        let g = common::instance(seed, n, 2, true);
        let demands = g.demands().iter().map(|d| nwsteiner::Demand { penalty: Rational::zero(), ..d.clone() }).collect();
        let g = normalize_demands(&g.with_demands(demands).unwrap());
        let (solution, cert, _) = solve_pcsf_traced(&g).unwrap();
        prop_assert!(solution.objective.is_zero());
        prop_assert!(cert.rounds.iter().all(|r| r.radius.is_zero()));
    }
}
