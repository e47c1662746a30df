//! Budget behaviour of the restructuring models.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use restruct_core::oracle::{oracle_restructure, RestructureCase};
use restruct_core::restructure::*;
use restruct_core::solvers::*;
use restruct_core::{Error, Id, Money};

fn units(u: i64) -> Money {
    Money::from_units(u)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() }
}

/// Goal instance over ids 1..=n, a start set, and strictly positive costs.
fn knapsack_case() -> impl Strategy<Value = (KnapsackInstance, BTreeSet<Id>, ChangeCosts)> {
    (1usize..=10).prop_flat_map(|n| {
        (
            prop::collection::vec((0i64..9, 1i64..6), n),
            0i64..25,
            prop::collection::vec(any::<bool>(), n + 2),
            prop::collection::vec((1i64..4, 1i64..4), n + 2),
        )
    })
    .prop_map(|(items, cap, start, costs)| {
        let goal = KnapsackInstance {
            items: items.iter().enumerate().map(|(i, &(p, w))| Item::new(i as u32 + 1, units(p), units(w))).collect(),
            capacity: units(cap),
        };
        // ids past n vanish at the goal stage
        let s0 = start.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| Id::from(i as u32 + 1)).collect();
        let mut cc = ChangeCosts::default();
        for (i, &(d, a)) in costs.iter().enumerate() {
            cc.delete.insert(Id::from(i as u32 + 1), units(d));
            cc.add.insert(Id::from(i as u32 + 1), units(a));
        }
        (goal, s0, cc)
    })
}

fn gap(plan: &RestructurePlan) -> Money {
    plan.proximity.scalar()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn knapsack_budget_monotone((goal, s0, costs) in knapsack_case(), b in 0i64..12) {
        let none = BTreeSet::new();
        let run = |b| restructure_knapsack(&s0, &goal, &costs, &none, units(b), KnapsackObjective::MaxProfit);
        match (run(b), run(b + 1)) {
            (Ok(lo), Ok(hi)) => {
                prop_assert!(lo.gain <= hi.gain);
                prop_assert!(gap(&lo) >= gap(&hi));
                prop_assert!(lo.cost <= units(b) && hi.cost <= units(b + 1));
            }
            (Err(Error::InfeasibleWithBudget { .. }), _) => {}
            (lo, hi) => prop_assert!(false, "budget {} gave {:?}, budget {} gave {:?}", b, lo, b + 1, hi),
        }
    }

    #[test]
    fn knapsack_zero_budget_is_fixed_point((goal, s0, costs) in knapsack_case()) {
        let s0: BTreeSet<Id> = s0.into_iter().filter(|id| goal.item(id).is_some()).collect();
        let start = goal.evaluate(&s0).unwrap();
        prop_assume!(start.weight <= goal.capacity);
        let plan = restructure_knapsack(&s0, &goal, &costs, &BTreeSet::new(), Money::ZERO, KnapsackObjective::MaxProfit).unwrap();
        prop_assert!(plan.is_empty());
        prop_assert_eq!(plan.cost, Money::ZERO);
        prop_assert_eq!(plan.solution, Solution::Subset(start));
    }

    #[test]
    fn knapsack_unbounded_budget_reaches_optimum((goal, s0, costs) in knapsack_case()) {
        let optimum = solve_knapsack(&goal).unwrap();
        let plan = restructure_knapsack(&s0, &goal, &costs, &BTreeSet::new(), costs.total(), KnapsackObjective::MaxProfit).unwrap();
        let Solution::Subset(sol) = &plan.solution else { panic!("subset expected") };
        prop_assert_eq!(sol.profit, optimum.profit);
        prop_assert_eq!(gap(&plan), Money::ZERO);
    }

    #[test]
    fn knapsack_diff_round_trips((goal, s0, costs) in knapsack_case(), b in 0i64..12) {
        let Ok(plan) = restructure_knapsack(&s0, &goal, &costs, &BTreeSet::new(), units(b), KnapsackObjective::MaxProfit) else {
            return Ok(());
        };
        let Solution::Subset(after) = &plan.solution else { panic!("subset expected") };
        let diff = SolutionDiff::between(&s0, &after.ids);
        prop_assert_eq!(&diff.apply(&s0), &after.ids);
        prop_assert_eq!(diff.deleted.len() + diff.added.len(), plan.ops.len());
        let charged: Money = diff.deleted.iter().map(|id| costs.delete_cost(id).unwrap())
            .chain(diff.added.iter().map(|id| costs.add_cost(id).unwrap()))
            .sum();
        prop_assert_eq!(charged, plan.cost);
    }

    #[test]
    fn ranking_budget_monotone_and_saturating(
        r1 in prop::collection::vec(0usize..4, 1..=8),
        r2 in prop::collection::vec(0usize..4, 8),
        b in 0i64..10,
    ) {
        let layered = |ls: &[usize]| {
            let mut layers = vec![BTreeSet::new(); 4];
            for (e, &l) in ls.iter().enumerate() {
                layers[l].insert(Id::from(e as u32));
            }
            LayeredRanking { layers }
        };
        let (a, g) = (layered(&r1), layered(&r2[..r1.len()]));
        let costs = MoveCosts { per_layer_step: units(1), overrides: BTreeMap::new() };
        let lo = restructure_ranking(&a, &g, &costs, units(b)).unwrap();
        let hi = restructure_ranking(&a, &g, &costs, units(b + 1)).unwrap();
        prop_assert!(gap(&lo) >= gap(&hi));
        let all = restructure_ranking(&a, &g, &costs, units(3 * 8 + 1)).unwrap();
        prop_assert_eq!(gap(&all), Money::ZERO);
        prop_assert_eq!(&all.solution, &Solution::Ranking(g.clone()));
        let none = restructure_ranking(&a, &g, &costs, Money::ZERO).unwrap();
        prop_assert!(none.is_empty());
    }

    #[test]
    fn clustering_matches_enumeration(
        x1 in prop::collection::vec(0u32..3, 7),
        x2 in prop::collection::vec(0u32..3, 7),
        costs in prop::collection::vec(1i64..4, 7),
        b in 0i64..10,
        choice in any::<bool>(),
    ) {
        let part = |xs: &[u32]| {
            let mut clusters: BTreeMap<Id, BTreeSet<Id>> = (0..3).map(|c| (Id::new(format!("c{c}")), BTreeSet::new())).collect();
            for (e, &c) in xs.iter().enumerate() {
                clusters.get_mut(&Id::new(format!("c{c}"))).unwrap().insert(Id::from(e as u32));
            }
            Partition { clusters }
        };
        let (p1, p2) = (part(&x1), part(&x2));
        let mut cc = ChangeCosts::default();
        for (e, &h) in costs.iter().enumerate() {
            cc.delete.insert(Id::from(e as u32), units(h));
            cc.add.insert(Id::from(e as u32), Money::ZERO);
        }
        let mut ops = moves_toward(&p1, &p2, &cc).unwrap();
        let model = if choice { ClusteringModel::MultipleChoice } else { ClusteringModel::Knapsack };
        if choice {
            // a second, pricier destination for each moved element
            let extra: Vec<ChangeOp> = ops.iter().filter_map(|op| {
                let from = op.from.clone()?;
                let alt = (0..3).map(|c| Id::new(format!("c{c}"))).find(|c| Some(c) != op.to.as_ref() && *c != from)?;
                Some(ChangeOp::new(op.kind, op.subject.clone(), op.cost + units(1)).moving(from, alt).with_profit(units(1)))
            }).collect();
            ops.extend(extra);
        }
        let got = restructure_clustering(&p1, &ops, units(b), model).unwrap();
        let want = oracle_restructure(&RestructureCase::Clustering { x1: &p1, ops: &ops, model }, units(b)).unwrap();
        prop_assert_eq!(got.gain, want.objective);
        prop_assert_eq!(&got.solution, &want.canonical);
        if b >= costs.iter().sum::<i64>() + 7 && !choice {
            prop_assert_eq!(&got.solution, &Solution::Partition(p2.clone()));
        }
    }
}
