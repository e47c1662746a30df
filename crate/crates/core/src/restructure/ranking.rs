use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::search::{top_picks, Budget, SlotOption, SlotProblem};
use super::{check_budget, ChangeKind, ChangeOp, LayeredRanking, Proximity, RestructurePlan, Solution};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;

/// Cost of moving an element to another layer: `per_layer_step` times the
/// layer distance unless an override for (element, destination layer)
/// exists. Layers are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCosts {
    pub per_layer_step: Money,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<Id, BTreeMap<usize, Money>>,
}

impl MoveCosts {
    pub fn uniform(per_layer_step: Money) -> MoveCosts {
        MoveCosts { per_layer_step, overrides: BTreeMap::new() }
    }

    pub fn cost(&self, e: &Id, from: usize, to: usize) -> Money {
        if from == to {
            return Money::ZERO;
        }
        self.overrides
            .get(e)
            .and_then(|m| m.get(&to))
            .copied()
            .unwrap_or_else(|| Money::from_tenths(self.per_layer_step.tenths() * from.abs_diff(to) as i64))
    }
}

fn check_pair(a: &LayeredRanking, b: &LayeredRanking) -> Result<()> {
    a.validate()?;
    b.validate()?;
    if a.layers.len() != b.layers.len() {
        return Err(Error::InvalidInstance(format!(
            "rankings have {} and {} layers",
            a.layers.len(),
            b.layers.len()
        )));
    }
    if a.universe() != b.universe() {
        return Err(Error::InvalidInstance("rankings cover different elements".into()));
    }
    Ok(())
}

/// Total absolute layer displacement between two rankings of one universe.
pub fn layer_distance(a: &LayeredRanking, b: &LayeredRanking) -> Result<u32> {
    check_pair(a, b)?;
    let pb = b.positions();
    Ok(a.positions().iter().map(|(e, &i)| i.abs_diff(pb[e]) as u32).sum())
}

/// Move elements between layers so the result is as close to `r2` as
/// possible while the total move cost stays strictly below `budget`.
/// A zero budget admits only the empty plan. Layers may become empty.
pub fn restructure_ranking(
    r1: &LayeredRanking,
    r2: &LayeredRanking,
    costs: &MoveCosts,
    budget: Money,
) -> Result<RestructurePlan> {
    let mut plans = restructure_ranking_top(r1, r2, costs, budget, 1)?;
    Ok(plans.remove(0))
}

pub fn restructure_ranking_top(
    r1: &LayeredRanking,
    r2: &LayeredRanking,
    costs: &MoveCosts,
    budget: Money,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    check_pair(r1, r2)?;
    check_budget(budget)?;
    if costs.per_layer_step.is_negative() || costs.overrides.values().flat_map(|m| m.values()).any(|c| c.is_negative()) {
        return Err(Error::InvalidInstance("move costs must be non-negative".into()));
    }
    let k = r1.layers.len();
    let start: Vec<(Id, usize)> = r1.positions().into_iter().collect();
    let target = r2.positions();
    let slots = start
        .iter()
        .map(|(e, at)| {
            let t = target[e];
            let mut opts = vec![SlotOption::keep(-(at.abs_diff(t) as i64), vec![])];
            for to in (1..=k).filter(|to| to != at) {
                opts.push(SlotOption::change(-(to.abs_diff(t) as i64), costs.cost(e, *at, to).tenths(), vec![]));
            }
            opts
        })
        .collect();
    let budget_rule = if budget == Money::ZERO {
        Budget::at_most(0)
    } else {
        Budget::below(budget.tenths())
    };
    let problem = SlotProblem { slots, capacity: vec![], budget: budget_rule };
    let before = layer_distance(r1, r2)?;
    Ok(top_picks(&problem, q.max(1))
        .into_iter()
        .map(|pick| {
            let mut layers = vec![BTreeSet::new(); k];
            let mut ops = Vec::new();
            for ((e, at), &o) in start.iter().zip(&pick.options) {
                let to = if o == 0 { *at } else { (1..=k).filter(|l| l != at).nth(o - 1).expect("option index") };
                layers[to - 1].insert(e.clone());
                if to != *at {
                    let t = target[e];
                    let profit = at.abs_diff(t) as i64 - to.abs_diff(t) as i64;
                    ops.push(
                        ChangeOp::new(ChangeKind::MoveBetweenClusters, e.clone(), costs.cost(e, *at, to))
                            .moving(Id::from(at.to_string()), Id::from(to.to_string()))
                            .with_profit(Money::from_units(profit)),
                    );
                }
            }
            let delta = (-pick.value) as u32;
            RestructurePlan {
                ops,
                solution: Solution::Ranking(LayeredRanking { layers }),
                cost: Money::from_tenths(pick.cost),
                gain: Money::from_units(i64::from(before) - i64::from(delta)),
                proximity: Proximity::Count { count: delta },
            }
        })
        .collect())
}

/// The plan that turns `from` into exactly `to`, measured against `goal`.
/// Budget is not checked.
pub fn ranking_transition(
    from: &LayeredRanking,
    to: &LayeredRanking,
    goal: &LayeredRanking,
    costs: &MoveCosts,
) -> Result<RestructurePlan> {
    check_pair(from, goal)?;
    check_pair(to, goal)?;
    let target = goal.positions();
    let dest = to.positions();
    let mut ops = Vec::new();
    for (e, at) in from.positions() {
        let next = dest[&e];
        if next == at {
            continue;
        }
        let t = target[&e];
        ops.push(
            ChangeOp::new(ChangeKind::MoveBetweenClusters, e.clone(), costs.cost(&e, at, next))
                .moving(Id::from(at.to_string()), Id::from(next.to_string()))
                .with_profit(Money::from_units(at.abs_diff(t) as i64 - next.abs_diff(t) as i64)),
        );
    }
    let before = layer_distance(from, goal)?;
    let delta = layer_distance(to, goal)?;
    Ok(RestructurePlan {
        cost: ops.iter().map(|op| op.cost).sum(),
        gain: Money::from_units(i64::from(before) - i64::from(delta)),
        proximity: Proximity::Count { count: delta },
        solution: Solution::Ranking(to.clone()),
        ops,
    })
}

/// Whether a ranking plan of cost `cost` fits `budget` (strict, except
/// that a zero budget admits the empty plan).
pub fn ranking_budget_admits(cost: Money, budget: Money) -> bool {
    if budget == Money::ZERO {
        cost == Money::ZERO
    } else {
        cost < budget
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::ids;

    fn rank(ls: &[&[u32]]) -> LayeredRanking {
        LayeredRanking::new(ls.iter().map(|l| ids(l.iter()).into_iter().collect()).collect()).unwrap()
    }

    #[test]
    fn layer_distance_counts_steps() {
        let a = rank(&[&[1], &[2], &[3]]);
        let b = rank(&[&[3], &[2], &[1]]);
        assert_eq!(layer_distance(&a, &b).unwrap(), 4);
        assert_eq!(layer_distance(&a, &a).unwrap(), 0);
    }

    #[test]
    fn strict_budget() {
        let a = rank(&[&[1, 2], &[3]]);
        let b = rank(&[&[1], &[2, 3]]);
        let costs = MoveCosts::uniform(Money::from_units(1));
        let plan = restructure_ranking(&a, &b, &costs, Money::from_units(1)).unwrap();
        assert!(plan.is_empty());
        assert_eq!(plan.proximity, Proximity::Count { count: 1 });
        let plan = restructure_ranking(&a, &b, &costs, Money::from_tenths(11)).unwrap();
        assert_eq!(plan.solution, Solution::Ranking(b));
        assert!(restructure_ranking(&a, &a, &costs, Money::ZERO).unwrap().is_empty());
    }

    #[test]
    fn layer_count_mismatch() {
        let a = rank(&[&[1, 2], &[3]]);
        let b = rank(&[&[1], &[2], &[3]]);
        assert!(matches!(
            restructure_ranking(&a, &b, &MoveCosts::uniform(Money::ZERO), Money::from_units(1)),
            Err(Error::InvalidInstance(_))
        ));
    }
}
