use std::collections::BTreeMap;

use super::search::{min_cost, top_picks, Budget, SlotOption, SlotProblem};
use super::{check_budget, ChangeCosts, ChangeKind, ChangeOp, Proximity, RestructurePlan, Solution};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::solvers::{solve_multiple_choice, MultipleChoiceInstance};

/// Change the current group selection toward the goal-stage optimum.
///
/// Per group at most one operation applies: replace the chosen item
/// (`h⁻(old) + h⁺(new)`), add an item to an empty group, or drop the item.
/// An item that no longer exists at the goal stage must be replaced or
/// dropped; its deletion cost defaults to zero.
pub fn restructure_multiple_choice(
    current: &BTreeMap<Id, Id>,
    goal: &MultipleChoiceInstance,
    costs: &ChangeCosts,
    budget: Money,
) -> Result<RestructurePlan> {
    let mut plans = restructure_multiple_choice_top(current, goal, costs, budget, 1)?;
    Ok(plans.remove(0))
}

pub fn restructure_multiple_choice_top(
    current: &BTreeMap<Id, Id>,
    goal: &MultipleChoiceInstance,
    costs: &ChangeCosts,
    budget: Money,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    goal.validate()?;
    costs.validate()?;
    check_budget(budget)?;
    if let Some(g) = current.keys().find(|g| goal.group(g).is_none()) {
        return Err(Error::InvalidInstance(format!("group {g} does not exist at the goal stage")));
    }
    let mut slots = Vec::new();
    let mut ops: Vec<Vec<(Option<Id>, Option<ChangeOp>)>> = Vec::new();
    let mut kept = Money::ZERO;
    for group in &goal.groups {
        let cur = current.get(&group.id);
        let cur_item = cur.and_then(|c| group.items.iter().find(|it| &it.id == c));
        let mut opts = Vec::new();
        let mut slot_ops = Vec::new();
        let out_cost = match (cur, cur_item) {
            (None, _) => Some(Money::ZERO),
            (Some(c), Some(_)) => costs.delete_cost(c),
            (Some(c), None) => Some(costs.delete_cost(c).unwrap_or(Money::ZERO)),
        };
        if let Some(it) = cur_item {
            kept += it.profit;
            opts.push(SlotOption::keep(it.profit.tenths(), vec![it.weight.tenths()]));
            slot_ops.push((Some(it.id.clone()), None));
        } else if cur.is_none() {
            opts.push(SlotOption::keep(0, vec![0]));
            slot_ops.push((None, None));
        }
        if let (Some(c), Some(h)) = (cur, out_cost) {
            opts.push(SlotOption::change(0, h.tenths(), vec![0]));
            let mut op = ChangeOp::new(ChangeKind::DeleteElement, c.clone(), h)
                .with_profit(-cur_item.map_or(Money::ZERO, |it| it.profit));
            op.from = Some(group.id.clone());
            slot_ops.push((None, Some(op)));
        }
        for it in &group.items {
            if Some(&it.id) == cur {
                continue;
            }
            let (Some(out), Some(add)) = (out_cost, costs.add_cost(&it.id)) else { continue };
            let cost = out + add;
            let delta = it.profit - cur_item.map_or(Money::ZERO, |c| c.profit);
            opts.push(SlotOption::change(it.profit.tenths(), cost.tenths(), vec![it.weight.tenths()]));
            let op = match cur {
                Some(c) => ChangeOp::new(ChangeKind::ReplaceInGroup, group.id.clone(), cost)
                    .moving(c.clone(), it.id.clone()),
                None => {
                    let mut op = ChangeOp::new(ChangeKind::AddElement, it.id.clone(), cost);
                    op.from = Some(group.id.clone());
                    op
                }
            };
            slot_ops.push((Some(it.id.clone()), Some(op.with_profit(delta))));
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
    let optimum = solve_multiple_choice(goal)?.profit;
    picks
        .into_iter()
        .map(|pick| {
            let mut chosen = BTreeMap::new();
            for ((group, &o), slot_ops) in goal.groups.iter().zip(&pick.options).zip(&ops) {
                if let Some(item) = &slot_ops[o].0 {
                    chosen.insert(group.id.clone(), item.clone());
                }
            }
            let plan = plan_between(current, &chosen, goal, costs, optimum)?
                .expect("search only offers available changes");
            debug_assert_eq!(plan.cost.tenths(), pick.cost);
            Ok(plan)
        })
        .collect()
}

/// The plan that turns `current` into exactly `target`; `None` when a
/// needed change has no listed cost. Capacity and budget are not checked.
pub fn multiple_choice_transition(
    current: &BTreeMap<Id, Id>,
    target: &BTreeMap<Id, Id>,
    goal: &MultipleChoiceInstance,
    costs: &ChangeCosts,
) -> Result<Option<RestructurePlan>> {
    goal.validate()?;
    let optimum = solve_multiple_choice(goal)?.profit;
    plan_between(current, target, goal, costs, optimum)
}

fn plan_between(
    current: &BTreeMap<Id, Id>,
    target: &BTreeMap<Id, Id>,
    goal: &MultipleChoiceInstance,
    costs: &ChangeCosts,
    optimum: Money,
) -> Result<Option<RestructurePlan>> {
    let mut ops = Vec::new();
    let mut kept = Money::ZERO;
    for group in &goal.groups {
        let find = |id: Option<&Id>| id.and_then(|id| group.items.iter().find(|it| &it.id == id));
        let cur = current.get(&group.id);
        let next = target.get(&group.id);
        let (cur_item, next_item) = (find(cur), find(next));
        if let (Some(id), None) = (next, next_item) {
            return Err(Error::InvalidChoice(format!("{id} is not an item of group {}", group.id)));
        }
        let before = cur_item.map_or(Money::ZERO, |it| it.profit);
        kept += before;
        if cur == next {
            continue;
        }
        let out = match (cur, cur_item) {
            (None, _) => Money::ZERO,
            (Some(c), Some(_)) => match costs.delete_cost(c) {
                Some(h) => h,
                None => return Ok(None),
            },
            (Some(c), None) => costs.delete_cost(c).unwrap_or(Money::ZERO),
        };
        let op = match (cur, next_item) {
            (Some(c), None) => {
                let mut op = ChangeOp::new(ChangeKind::DeleteElement, c.clone(), out).with_profit(-before);
                op.from = Some(group.id.clone());
                op
            }
            (_, Some(it)) => {
                let Some(add) = costs.add_cost(&it.id) else { return Ok(None) };
                let mut op = match cur {
                    Some(c) => ChangeOp::new(ChangeKind::ReplaceInGroup, group.id.clone(), out + add)
                        .moving(c.clone(), it.id.clone()),
                    None => {
                        let mut op = ChangeOp::new(ChangeKind::AddElement, it.id.clone(), out + add);
                        op.from = Some(group.id.clone());
                        op
                    }
                };
                op.profit = it.profit - before;
                op
            }
            (None, None) => unreachable!("equal selections skipped"),
        };
        ops.push(op);
    }
    let selection = goal.evaluate(target)?;
    Ok(Some(RestructurePlan {
        cost: ops.iter().map(|op| op.cost).sum(),
        gain: selection.profit - kept,
        proximity: Proximity::Value { value: (optimum - selection.profit).abs() },
        solution: Solution::Selection(selection),
        ops,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{Item, McGroup};

    fn m(s: &str) -> Money {
        s.parse().unwrap()
    }

    fn goal() -> MultipleChoiceInstance {
        MultipleChoiceInstance {
            groups: vec![
                McGroup {
                    id: "A".into(),
                    items: vec![Item::new("a1", m("1"), m("1")), Item::new("a2", m("3"), m("1"))],
                },
                McGroup {
                    id: "B".into(),
                    items: vec![Item::new("b1", m("2"), m("1")), Item::new("b2", m("3"), m("1"))],
                },
            ],
            capacity: m("10"),
        }
    }

    fn start() -> BTreeMap<Id, Id> {
        [("A".into(), "a1".into()), ("B".into(), "b1".into())].into_iter().collect()
    }

    #[test]
    fn replaces_best_gain_first() {
        let costs = ChangeCosts::uniform(m("1"), m("1"));
        let plan = restructure_multiple_choice(&start(), &goal(), &costs, m("2")).unwrap();
        assert_eq!(plan.ops.len(), 1);
        assert_eq!(plan.ops[0].to, Some("a2".into()));
        assert_eq!(plan.gain, m("2"));
        assert_eq!(plan.proximity, Proximity::Value { value: m("1") });
    }

    #[test]
    fn zero_budget_is_identity() {
        let costs = ChangeCosts::uniform(m("1"), m("1"));
        let plan = restructure_multiple_choice(&start(), &goal(), &costs, Money::ZERO).unwrap();
        assert!(plan.is_empty());
    }

    #[test]
    fn vanished_item_must_go() {
        let costs = ChangeCosts::uniform(m("1"), m("1"));
        let mut cur = start();
        cur.insert("A".into(), "a9".into());
        let plan = restructure_multiple_choice(&cur, &goal(), &costs, m("2")).unwrap();
        assert_eq!(plan.ops[0].from, Some("a9".into()));
        assert_eq!(plan.ops[0].to, Some("a2".into()));
        // with no addition costs the only way out is dropping it for free
        let plan = restructure_multiple_choice(&cur, &goal(), &ChangeCosts::default(), Money::ZERO).unwrap();
        assert_eq!(plan.ops[0].kind, ChangeKind::DeleteElement);
        assert!(!plan.solution.to_string().contains("A:"));
    }
}
