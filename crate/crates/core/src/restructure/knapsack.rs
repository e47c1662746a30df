use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::search::{min_cost, top_picks, Budget, SlotOption, SlotProblem};
use super::{check_budget, ChangeCosts, ChangeKind, ChangeOp, Proximity, RestructurePlan, Solution};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::solvers::{solve_knapsack, KnapsackInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnapsackObjective {
    /// Maximize goal-stage profit of the new subset.
    #[default]
    MaxProfit,
    /// Minimize the profit gap to the goal-stage optimum.
    MinProximity,
}

/// Turn `s0` into a subset feasible for `goal` within `budget`.
///
/// Elements of `fixed` stay in place. Elements of `s0` missing from the goal
/// instance are always deleted and their deletion cost is charged. Both
/// objectives rank plans identically: a feasible subset never beats the
/// goal optimum, so the gap shrinks exactly as profit grows.
pub fn restructure_knapsack(
    s0: &BTreeSet<Id>,
    goal: &KnapsackInstance,
    costs: &ChangeCosts,
    fixed: &BTreeSet<Id>,
    budget: Money,
    objective: KnapsackObjective,
) -> Result<RestructurePlan> {
    let mut plans = restructure_knapsack_top(s0, goal, costs, fixed, budget, objective, 1)?;
    Ok(plans.remove(0))
}

/// Up to `q` best plans in rank order (never empty on success).
pub fn restructure_knapsack_top(
    s0: &BTreeSet<Id>,
    goal: &KnapsackInstance,
    costs: &ChangeCosts,
    fixed: &BTreeSet<Id>,
    budget: Money,
    _objective: KnapsackObjective,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    goal.validate()?;
    costs.validate()?;
    check_budget(budget)?;
    if let Some(stray) = fixed.difference(s0).next() {
        return Err(Error::InvalidInstance(format!("fixed element {stray} is not in the current solution")));
    }
    let items = goal.by_id();
    let universe: BTreeSet<&Id> = s0.iter().chain(items.keys().copied()).collect();
    let mut slots = Vec::new();
    let mut ops = Vec::new();
    for &id in &universe {
        let item = items.get(id);
        let (c, a) = item.map_or((0, 0), |it| (it.profit.tenths(), it.weight.tenths()));
        let mut opts = Vec::new();
        let mut slot_ops = Vec::new();
        if s0.contains(id) {
            if item.is_some() {
                opts.push(SlotOption::keep(c, vec![a]));
                slot_ops.push(None);
            } else if fixed.contains(id) {
                return Err(Error::InvalidInstance(format!("fixed element {id} is absent at the goal stage")));
            }
            if !fixed.contains(id) {
                let h = match (costs.delete_cost(id), item) {
                    (Some(h), _) => Some(h),
                    (None, None) => Some(Money::ZERO),
                    (None, Some(_)) => None,
                };
                if let Some(h) = h {
                    opts.push(SlotOption::change(0, h.tenths(), vec![0]));
                    slot_ops.push(Some(
                        ChangeOp::new(ChangeKind::DeleteElement, id.clone(), h)
                            .with_profit(Money::from_tenths(-c)),
                    ));
                }
            }
        } else {
            opts.push(SlotOption::keep(0, vec![0]));
            slot_ops.push(None);
            if let Some(h) = costs.add_cost(id) {
                opts.push(SlotOption::change(c, h.tenths(), vec![a]));
                slot_ops.push(Some(
                    ChangeOp::new(ChangeKind::AddElement, id.clone(), h)
                        .with_profit(Money::from_tenths(c)),
                ));
            }
        }
        slots.push(opts);
        ops.push(slot_ops);
    }
    let problem = SlotProblem {
        slots,
        capacity: vec![goal.capacity.tenths()],
        budget: Budget::at_most(budget.tenths()),
    };
    let picks = top_picks(&problem, q.max(1));
    if picks.is_empty() {
        return Err(Error::InfeasibleWithBudget {
            budget,
            min_budget: min_cost(&problem).map(Money::from_tenths),
        });
    }
    let optimum = solve_knapsack(goal)?.profit;
    picks
        .into_iter()
        .map(|pick| {
            let mut ids = s0.clone();
            for (&o, slot_ops) in pick.options.iter().zip(&ops) {
                if let Some(op) = &slot_ops[o] {
                    if let super::Subject::Element(id) = &op.subject {
                        match op.kind {
                            ChangeKind::DeleteElement => ids.remove(id),
                            _ => ids.insert(id.clone()),
                        };
                    }
                }
            }
            let plan = plan_between(s0, &ids, goal, costs, fixed, optimum)?
                .expect("search only offers available changes");
            debug_assert_eq!(plan.cost.tenths(), pick.cost);
            Ok(plan)
        })
        .collect()
}

/// The plan that turns `s0` into exactly `target`; `None` when a needed
/// change has no listed cost or touches the fixed core. Capacity and budget
/// are not checked.
pub fn knapsack_transition(
    s0: &BTreeSet<Id>,
    target: &BTreeSet<Id>,
    goal: &KnapsackInstance,
    costs: &ChangeCosts,
    fixed: &BTreeSet<Id>,
) -> Result<Option<RestructurePlan>> {
    goal.validate()?;
    let optimum = solve_knapsack(goal)?.profit;
    plan_between(s0, target, goal, costs, fixed, optimum)
}

fn plan_between(
    s0: &BTreeSet<Id>,
    target: &BTreeSet<Id>,
    goal: &KnapsackInstance,
    costs: &ChangeCosts,
    fixed: &BTreeSet<Id>,
    optimum: Money,
) -> Result<Option<RestructurePlan>> {
    let items = goal.by_id();
    let profit = |id: &Id| items.get(id).map_or(Money::ZERO, |it| it.profit);
    let mut ops = Vec::new();
    for id in s0.difference(target) {
        if fixed.contains(id) {
            return Ok(None);
        }
        let h = match costs.delete_cost(id) {
            Some(h) => h,
            None if !items.contains_key(id) => Money::ZERO,
            None => return Ok(None),
        };
        ops.push(ChangeOp::new(ChangeKind::DeleteElement, id.clone(), h).with_profit(-profit(id)));
    }
    for id in target.difference(s0) {
        let Some(h) = costs.add_cost(id) else { return Ok(None) };
        ops.push(ChangeOp::new(ChangeKind::AddElement, id.clone(), h).with_profit(profit(id)));
    }
    ops.sort_by(|a, b| a.subject.cmp(&b.subject));
    let solution = goal.evaluate(target)?;
    let kept: Money = s0.iter().map(profit).sum();
    Ok(Some(RestructurePlan {
        cost: ops.iter().map(|op| op.cost).sum(),
        gain: solution.profit - kept,
        proximity: Proximity::Value { value: (optimum - solution.profit).abs() },
        solution: Solution::Subset(solution),
        ops,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::ids;
    use crate::solvers::Item;

    fn m(s: &str) -> Money {
        s.parse().unwrap()
    }

    fn inst() -> KnapsackInstance {
        KnapsackInstance {
            items: vec![
                Item::new(1, m("3"), m("2")),
                Item::new(2, m("4"), m("3")),
                Item::new(3, m("5"), m("4")),
            ],
            capacity: m("5"),
        }
    }

    fn set(v: &[u32]) -> BTreeSet<Id> {
        ids(v.iter()).into_iter().collect()
    }

    #[test]
    fn zero_budget_keeps_feasible_start() {
        let costs = ChangeCosts::uniform(m("1"), m("1"));
        let plan = restructure_knapsack(&set(&[1]), &inst(), &costs, &BTreeSet::new(), Money::ZERO, KnapsackObjective::MaxProfit)
            .unwrap();
        assert!(plan.is_empty());
        assert_eq!(plan.proximity, Proximity::Value { value: m("4") });
    }

    #[test]
    fn adds_within_budget() {
        let costs = ChangeCosts::uniform(m("1"), m("1"));
        let plan = restructure_knapsack(&set(&[1]), &inst(), &costs, &BTreeSet::new(), m("1"), KnapsackObjective::MaxProfit)
            .unwrap();
        let Solution::Subset(s) = &plan.solution else { panic!() };
        assert_eq!(s.ids, set(&[1, 2]));
        assert_eq!(plan.gain, m("4"));
        assert_eq!(plan.proximity, Proximity::Value { value: Money::ZERO });
    }

    #[test]
    fn overweight_start_needs_repair() {
        let costs = ChangeCosts::uniform(m("2"), m("1"));
        let err = restructure_knapsack(&set(&[1, 3]), &inst(), &costs, &BTreeSet::new(), m("1"), KnapsackObjective::MaxProfit)
            .unwrap_err();
        assert!(matches!(err, Error::InfeasibleWithBudget { min_budget: Some(b), .. } if b == m("2")));
    }

    #[test]
    fn fixed_core_is_never_deleted() {
        let costs = ChangeCosts::uniform(m("0"), m("0"));
        let plan = restructure_knapsack(&set(&[3]), &inst(), &costs, &set(&[3]), m("9"), KnapsackObjective::MaxProfit)
            .unwrap();
        let Solution::Subset(s) = &plan.solution else { panic!() };
        assert!(s.ids.contains(&Id::from(3u32)));
    }
}
