use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::search::{min_cost, top_picks, Budget, SlotOption, SlotProblem};
use super::{check_budget, ChangeKind, ChangeOp, Proximity, RestructurePlan, Solution, Subject};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;

/// Elements placed at positions, with optional per-position capacities
/// (positions without one are unbounded).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AssignmentState {
    pub positions: BTreeMap<Id, Id>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub capacity: BTreeMap<Id, u32>,
}

impl AssignmentState {
    pub fn load(&self) -> BTreeMap<&Id, u32> {
        let mut load = BTreeMap::new();
        for p in self.positions.values() {
            *load.entry(p).or_insert(0) += 1;
        }
        load
    }
}

/// Choose reassignment operations with maximal total profit within budget.
///
/// Each op moves one element from its current position; an element may be
/// the subject of one op only. `ρ` is the profit left unrealized.
pub fn restructure_assignment(
    current: &AssignmentState,
    ops: &[ChangeOp],
    budget: Money,
) -> Result<RestructurePlan> {
    let mut plans = restructure_assignment_top(current, ops, budget, 1)?;
    Ok(plans.remove(0))
}

pub fn restructure_assignment_top(
    current: &AssignmentState,
    ops: &[ChangeOp],
    budget: Money,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    check_budget(budget)?;
    let mut seen = BTreeSet::new();
    for op in ops {
        let Subject::Element(e) = &op.subject else {
            return Err(Error::InvalidOps(format!("reassignment subject {} is not an element", op.subject)));
        };
        if op.kind != ChangeKind::ReassignPosition {
            return Err(Error::InvalidOps(format!("op on {e} is not a reassignment")));
        }
        if !seen.insert(e) {
            return Err(Error::InvalidOps(format!("element {e} is moved by more than one op")));
        }
        let Some(at) = current.positions.get(e) else {
            return Err(Error::InvalidOps(format!("element {e} is not assigned")));
        };
        match (&op.from, &op.to) {
            (Some(from), Some(to)) if from == at && to != from => {}
            _ => {
                return Err(Error::InvalidOps(format!(
                    "op on {e} must move it from its current position {at} to another"
                )))
            }
        }
        if op.cost.is_negative() {
            return Err(Error::InvalidOps(format!("op on {e} has negative cost")));
        }
    }
    let dims: Vec<&Id> = current.capacity.keys().collect();
    let load = current.load();
    let capacity: Vec<i64> = dims
        .iter()
        .map(|p| i64::from(current.capacity[*p]) - i64::from(load.get(p).copied().unwrap_or(0)))
        .collect();
    let delta = |p: &Option<Id>| dims.iter().position(|d| Some(*d) == p.as_ref());
    let slots = ops
        .iter()
        .map(|op| {
            let mut l = vec![0; dims.len()];
            if let Some(i) = delta(&op.from) {
                l[i] -= 1;
            }
            if let Some(i) = delta(&op.to) {
                l[i] += 1;
            }
            vec![
                SlotOption::keep(0, vec![0; dims.len()]),
                SlotOption::change(op.profit.tenths(), op.cost.tenths(), l),
            ]
        })
        .collect();
    let problem = SlotProblem { slots, capacity, budget: Budget::at_most(budget.tenths()) };
    let picks = top_picks(&problem, q.max(1));
    if picks.is_empty() {
        return Err(Error::InfeasibleWithBudget {
            budget,
            min_budget: min_cost(&problem).map(Money::from_tenths),
        });
    }
    let available: Money = ops.iter().map(|op| op.profit).filter(|p| !p.is_negative()).sum();
    Ok(picks
        .into_iter()
        .map(|pick| {
            let chosen: Vec<ChangeOp> = ops
                .iter()
                .zip(&pick.options)
                .filter(|(_, &o)| o == 1)
                .map(|(op, _)| op.clone())
                .collect();
            let mut state = current.clone();
            for op in &chosen {
                if let (Subject::Element(e), Some(to)) = (&op.subject, &op.to) {
                    state.positions.insert(e.clone(), to.clone());
                }
            }
            let gain = Money::from_tenths(pick.value);
            RestructurePlan {
                cost: Money::from_tenths(pick.cost),
                gain,
                proximity: Proximity::Value { value: available - gain },
                solution: Solution::Assignment(state),
                ops: chosen,
            }
        })
        .collect())
}
