//! Main solvers against exhaustive enumeration on random small instances.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use restruct_core::oracle::*;
use restruct_core::restructure::*;
use restruct_core::solvers::*;
use restruct_core::{Id, Money};

fn units(u: i64) -> Money {
    Money::from_units(u)
}

fn knapsack(max_items: usize) -> impl Strategy<Value = KnapsackInstance> {
    (prop::collection::vec((0i64..8, 1i64..8), 0..=max_items), 0i64..30).prop_map(|(items, cap)| KnapsackInstance {
        items: items.into_iter().enumerate().map(|(i, (p, w))| Item::new(i as u32 + 1, units(p), units(w))).collect(),
        capacity: units(cap),
    })
}

fn choice() -> impl Strategy<Value = MultipleChoiceInstance> {
    (prop::collection::vec(prop::collection::vec((0i64..6, 1i64..6), 1..=3), 1..=4), 0i64..15).prop_map(
        |(groups, cap)| {
            let mut next = 0u32;
            MultipleChoiceInstance {
                groups: groups
                    .into_iter()
                    .enumerate()
                    .map(|(g, items)| McGroup {
                        id: Id::new(format!("g{g}")),
                        items: items
                            .into_iter()
                            .map(|(p, w)| {
                                next += 1;
                                Item::new(next, units(p), units(w))
                            })
                            .collect(),
                    })
                    .collect(),
                capacity: units(cap),
            }
        },
    )
}

fn assignment() -> impl Strategy<Value = AssignmentInstance> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0i64..5, n), n)
            .prop_map(|rows| AssignmentInstance { profit: rows.into_iter().map(|r| r.into_iter().map(units).collect()).collect() })
    })
}

/// Connected graph on up to 7 vertices: a random spanning path plus extras.
fn graph() -> impl Strategy<Value = WeightedGraph> {
    (2u32..=7).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (prop::collection::vec(prop::option::of(1i64..6), m), Just(pairs), Just(n))
    })
    .prop_map(|(ws, pairs, n)| {
        let mut edges = Vec::new();
        for ((a, b), w) in pairs.into_iter().zip(ws) {
            let w = if b == a + 1 { Some(w.unwrap_or(5)) } else { w };
            if let Some(w) = w {
                edges.push(Edge::new(a, b, units(w)));
            }
        }
        WeightedGraph { vertices: (1..=n).map(Id::from).collect(), steiner: BTreeSet::new(), edges }
    })
}

fn morph() -> impl Strategy<Value = MorphSystem> {
    prop::collection::vec(prop::collection::vec(1u8..=3, 1..=5), 2..=4)
        .prop_flat_map(|comps| {
            let ids: Vec<Vec<String>> = comps
                .iter()
                .enumerate()
                .map(|(c, alts)| (0..alts.len()).map(|a| format!("{}{}", (b'A' + c as u8) as char, a + 1)).collect())
                .collect();
            let mut pairs = Vec::new();
            for i in 0..ids.len() {
                for j in i + 1..ids.len() {
                    for a in &ids[i] {
                        for b in &ids[j] {
                            pairs.push((a.clone(), b.clone()));
                        }
                    }
                }
            }
            let n = pairs.len();
            (Just(comps), Just(ids), Just(pairs), prop::collection::vec(0u8..=3, n))
        })
        .prop_map(|(comps, ids, pairs, ws)| MorphSystem {
            levels: 3,
            compat_max: 3,
            components: comps
                .iter()
                .zip(&ids)
                .enumerate()
                .map(|(c, (prio, names))| Component {
                    id: Id::new(((b'A' + c as u8) as char).to_string()),
                    alternatives: prio
                        .iter()
                        .zip(names)
                        .map(|(&p, n)| Alternative { id: Id::new(n.clone()), priority: p })
                        .collect(),
                })
                .collect(),
            compatibility: pairs
                .into_iter()
                .zip(ws)
                .map(|((a, b), w)| Compatibility { a: Id::new(a), b: Id::new(b), w })
                .collect(),
        })
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn knapsack_matches_enumeration(inst in knapsack(15)) {
        let got = solve_knapsack(&inst).unwrap();
        let want = oracle_knapsack(&inst).unwrap();
        prop_assert_eq!(got.profit, want.objective);
        prop_assert_eq!(got, want.canonical);
    }

    #[test]
    fn multiple_choice_matches_enumeration(inst in choice()) {
        let got = solve_multiple_choice(&inst).unwrap();
        let want = oracle_multiple_choice(&inst).unwrap();
        prop_assert_eq!(got.profit, want.objective);
        prop_assert_eq!(got, want.canonical);
    }

    #[test]
    fn assignment_matches_enumeration(inst in assignment()) {
        let got = solve_assignment(&inst).unwrap();
        let want = oracle_assignment(&inst).unwrap();
        prop_assert_eq!(inst.value(&got), want.objective);
        prop_assert_eq!(got, want.canonical);
    }

    #[test]
    fn spanning_tree_matches_enumeration(g in graph()) {
        let got = minimum_spanning_tree(&g).unwrap();
        let want = oracle_spanning_tree(&g).unwrap();
        prop_assert_eq!(got.weight, want.objective);
        prop_assert_eq!(got, want.canonical);
    }

    #[test]
    fn hmmd_front_matches_all_pairs(sys in morph()) {
        let front = hmmd_synthesize(&sys);
        let mut all = Vec::new();
        let radix: Vec<usize> = sys.components.iter().map(|c| c.alternatives.len()).collect();
        let total: usize = radix.iter().product();
        prop_assert!(total <= 10_000);
        for mut n in 0..total {
            let choice: Vec<Id> = sys.components.iter().zip(&radix).rev().map(|(c, &r)| {
                let a = c.alternatives[n % r].id.clone();
                n /= r;
                a
            }).collect::<Vec<_>>().into_iter().rev().collect();
            if let Ok(q) = evaluate_composite(&sys, &choice) {
                if q.w.value() > 0 {
                    all.push((choice, q));
                }
            }
        }
        if all.is_empty() {
            prop_assert!(front.map_or(true, |f| f.is_empty()));
            return Ok(());
        }
        // minimization encoding: negated compatibility and negated prefix sums
        let vectors: Vec<Vec<i64>> = all.iter().map(|(_, q)| {
            let mut acc = 0i64;
            std::iter::once(-i64::from(q.w.value()))
                .chain(q.n.counts().iter().map(|&c| { acc += i64::from(c); -acc }))
                .collect()
        }).collect();
        let want: BTreeSet<Vec<Id>> =
            oracle_pareto(&vectors).unwrap().canonical.into_iter().map(|i| all[i].0.clone()).collect();
        let got: BTreeSet<Vec<Id>> = front.unwrap().into_iter().map(|c| c.choice).collect();
        prop_assert_eq!(got, want);
    }
}

fn id_set(mask: u32, n: u32) -> BTreeSet<Id> {
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| Id::from(i + 1)).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn knapsack_restructure_matches_enumeration(
        goal in knapsack(8),
        s0 in 0u32..1 << 10,
        fixed in 0u32..1 << 10,
        hdel in prop::collection::vec(prop::option::of(0i64..4), 10),
        hadd in prop::collection::vec(prop::option::of(0i64..4), 10),
        budget in 0i64..8,
    ) {
        let s0 = id_set(s0, 10);
        let fixed: BTreeSet<Id> = id_set(fixed, 10).intersection(&s0).cloned().collect();
        let mut costs = ChangeCosts::default();
        for (i, (d, a)) in hdel.iter().zip(&hadd).enumerate() {
            if let Some(d) = d { costs.delete.insert(Id::from(i as u32 + 1), units(*d)); }
            if let Some(a) = a { costs.add.insert(Id::from(i as u32 + 1), units(*a)); }
        }
        let case = RestructureCase::Knapsack { s0: &s0, goal: &goal, costs: &costs, fixed: &fixed };
        let got = restructure_knapsack(&s0, &goal, &costs, &fixed, units(budget), KnapsackObjective::MaxProfit);
        match oracle_restructure(&case, units(budget)) {
            Ok(want) => {
                let plan = got.unwrap();
                prop_assert_eq!(plan.gain, want.objective);
                prop_assert_eq!(plan.solution, want.canonical);
            }
            Err(restruct_core::Error::InvalidInstance(_)) => {
                prop_assert!(matches!(got, Err(restruct_core::Error::InvalidInstance(_))));
            }
            Err(_) => {
                let hint = oracle_min_budget(&case).unwrap();
                match got {
                    Err(restruct_core::Error::InfeasibleWithBudget { min_budget, .. }) => prop_assert_eq!(min_budget, hint),
                    other => prop_assert!(false, "expected infeasible, got {:?}", other),
                }
            }
        }
    }

    #[test]
    fn choice_restructure_matches_enumeration(
        goal in choice(),
        cur in prop::collection::vec(prop::option::of(0u32..14), 4),
        hdel in prop::collection::vec(prop::option::of(0i64..3), 14),
        hadd in prop::collection::vec(prop::option::of(0i64..3), 14),
        budget in 0i64..6,
    ) {
        let current: BTreeMap<Id, Id> = cur.iter().take(goal.groups.len()).enumerate().filter_map(|(g, it)| it.map(|i| (Id::new(format!("g{g}")), Id::from(i)))).collect();
        let mut costs = ChangeCosts::default();
        for (i, (d, a)) in hdel.iter().zip(&hadd).enumerate() {
            if let Some(d) = d { costs.delete.insert(Id::from(i as u32), units(*d)); }
            if let Some(a) = a { costs.add.insert(Id::from(i as u32), units(*a)); }
        }
        let case = RestructureCase::MultipleChoice { current: &current, goal: &goal, costs: &costs };
        let got = restructure_multiple_choice(&current, &goal, &costs, units(budget));
        match oracle_restructure(&case, units(budget)) {
            Ok(want) => {
                let plan = got.unwrap();
                prop_assert_eq!(plan.gain, want.objective);
                prop_assert_eq!(plan.solution, want.canonical);
            }
            Err(_) => prop_assert!(got.is_err(), "expected infeasible, got {:?}", got),
        }
    }

    #[test]
    fn assignment_restructure_matches_enumeration(
        start in prop::collection::vec(0u32..3, 6),
        moves in prop::collection::vec(prop::option::of((0u32..3, 0i64..4, 0i64..5)), 6),
        caps in prop::collection::vec(1u32..4, 3),
        budget in 0i64..8,
    ) {
        let pos = |p: u32| Id::new(format!("p{p}"));
        let current = AssignmentState {
            positions: start.iter().enumerate().map(|(e, &p)| (Id::from(e as u32), pos(p))).collect(),
            capacity: caps.iter().enumerate().map(|(p, &c)| (pos(p as u32), c)).collect(),
        };
        let ops: Vec<ChangeOp> = moves.iter().enumerate().filter_map(|(e, m)| {
            let (to, cost, profit) = (*m)?;
            (to != start[e]).then(|| ChangeOp::new(ChangeKind::ReassignPosition, Id::from(e as u32), units(cost))
                .moving(pos(start[e]), pos(to))
                .with_profit(units(profit)))
        }).collect();
        let case = RestructureCase::Assignment { current: &current, ops: &ops };
        let got = restructure_assignment(&current, &ops, units(budget));
        match oracle_restructure(&case, units(budget)) {
            Ok(want) => {
                let plan = got.unwrap();
                prop_assert_eq!(plan.gain, want.objective);
                prop_assert_eq!(plan.solution, want.canonical);
            }
            Err(_) => prop_assert!(got.is_err(), "expected infeasible, got {:?}", got),
        }
    }

    #[test]
    fn ranking_restructure_matches_enumeration(
        r1 in prop::collection::vec(0usize..3, 1..=6),
        r2 in prop::collection::vec(0usize..3, 6),
        step in 1i64..3,
        budget in 0i64..8,
    ) {
        let layered = |ls: &[usize]| {
            let mut layers = vec![BTreeSet::new(); 3];
            for (e, &l) in ls.iter().enumerate() {
                layers[l].insert(Id::from(e as u32));
            }
            LayeredRanking { layers }
        };
        let (a, b) = (layered(&r1), layered(&r2[..r1.len()]));
        let costs = MoveCosts { per_layer_step: units(step), overrides: BTreeMap::new() };
        let case = RestructureCase::Ranking { r1: &a, r2: &b, costs: &costs };
        let got = restructure_ranking(&a, &b, &costs, units(budget)).unwrap();
        let want = oracle_restructure(&case, units(budget)).unwrap();
        prop_assert_eq!(-got.proximity.scalar(), want.objective);
        prop_assert_eq!(got.solution, want.canonical);
    }

    #[test]
    fn tree_restructure_matches_enumeration(g in graph(), budget in 0i64..10, metric in any::<bool>()) {
        let t1 = oracle_spanning_tree(&g).unwrap().canonical;
        let mut goal = g.clone();
        // perturb weights so the goal optimum moves
        for (i, e) in goal.edges.iter_mut().enumerate() {
            e.weight = units((e.weight.tenths() / 10 * 7 + i as i64 * 3) % 6 + 1);
        }
        prop_assume!(goal.edges.len() <= RESTRUCTURE_CAP);
        let target = minimum_spanning_tree(&goal).unwrap();
        let kind = if metric { TreeProximity::WeightDelta } else { TreeProximity::EdgeSymmetricDifference };
        let costs = ChangeCosts::uniform(units(1), units(1));
        let none = ChangeCosts::default();
        let case = RestructureCase::Tree {
            t1: &t1, goal: &goal, edge_costs: &costs, steiner_costs: &none, proximity: kind, target: &target,
        };
        let got = restructure_tree(&t1.edges, &goal, &costs, units(budget), kind, Some(&target)).unwrap();
        let want = oracle_restructure(&case, units(budget)).unwrap();
        prop_assert_eq!(-got.proximity.scalar(), want.objective);
        prop_assert_eq!(got.solution, want.canonical);
    }
}
