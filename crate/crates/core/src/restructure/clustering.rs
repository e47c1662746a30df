use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::search::{top_picks, Budget, SlotOption, SlotProblem};
use super::{check_budget, ChangeCosts, ChangeKind, ChangeOp, Partition, Proximity, RestructurePlan, Solution, Subject};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusteringModel {
    /// Independent moves; each element may appear in one move only.
    #[default]
    Knapsack,
    /// Moves grouped by element; at most one per element is taken.
    MultipleChoice,
}

fn subject(op: &ChangeOp) -> Result<&Id> {
    match (&op.kind, &op.subject) {
        (ChangeKind::MoveBetweenClusters, Subject::Element(e)) => Ok(e),
        _ => Err(Error::InvalidOps(format!("{op} is not a move between clusters"))),
    }
}

fn check_move(x: &Partition, op: &ChangeOp) -> Result<()> {
    let e = subject(op)?;
    let at = x
        .cluster_of(e)
        .ok_or_else(|| Error::InvalidOps(format!("element {e} is not clustered")))?;
    match (&op.from, &op.to) {
        (Some(from), Some(to)) if from == at && to != from && x.clusters.contains_key(to) => Ok(()),
        _ => Err(Error::InvalidOps(format!(
            "move of {e} must start at its cluster {at} and end at another existing cluster"
        ))),
    }
}

/// Apply moves to a partition. The set of clusters never changes; a
/// cluster may end up empty.
pub fn apply_moves(x: &Partition, ops: &[ChangeOp]) -> Result<Partition> {
    let mut moved = BTreeSet::new();
    let mut out = x.clone();
    for op in ops {
        check_move(x, op)?;
        let e = subject(op)?;
        if !moved.insert(e) {
            return Err(Error::InvalidOps(format!("element {e} moved twice")));
        }
        let (Some(from), Some(to)) = (&op.from, &op.to) else { unreachable!() };
        out.clusters.get_mut(from).expect("checked").remove(e);
        out.clusters.get_mut(to).expect("checked").insert(e.clone());
    }
    Ok(out)
}

/// One move per element whose cluster differs between `x1` and `x2`
/// (clusters matched by id). Each move shrinks the labeled symmetric
/// difference by 2, which is used as its profit; its cost is the element's
/// deletion plus addition cost. Elements without both costs are skipped.
pub fn moves_toward(x1: &Partition, x2: &Partition, costs: &ChangeCosts) -> Result<Vec<ChangeOp>> {
    if x1.universe() != x2.universe() {
        return Err(Error::InvalidInstance("partitions cover different elements".into()));
    }
    if x1.clusters.keys().ne(x2.clusters.keys()) {
        return Err(Error::InvalidInstance("partitions use different clusters".into()));
    }
    let target = x2.membership();
    let mut ops = Vec::new();
    for (e, from) in x1.membership() {
        let to = &target[&e];
        if *to == from {
            continue;
        }
        if let (Some(d), Some(a)) = (costs.delete_cost(&e), costs.add_cost(&e)) {
            ops.push(
                ChangeOp::new(ChangeKind::MoveBetweenClusters, e, d + a)
                    .moving(from, to.clone())
                    .with_profit(Money::from_units(2)),
            );
        }
    }
    Ok(ops)
}

/// Select moves with maximal total profit and total cost within `budget`.
pub fn restructure_clustering(
    x1: &Partition,
    ops: &[ChangeOp],
    budget: Money,
    model: ClusteringModel,
) -> Result<RestructurePlan> {
    x1.validate()?;
    check_budget(budget)?;
    for op in ops {
        check_move(x1, op)?;
        if op.cost.is_negative() {
            return Err(Error::InvalidOps(format!("{op} has negative cost")));
        }
    }
    // slot -> indices into ops
    let groups: Vec<Vec<usize>> = match model {
        ClusteringModel::Knapsack => {
            let mut seen = BTreeSet::new();
            for op in ops {
                let e = subject(op)?;
                if !seen.insert(e) {
                    return Err(Error::InvalidOps(format!("element {e} is moved by more than one op")));
                }
            }
            (0..ops.len()).map(|i| vec![i]).collect()
        }
        ClusteringModel::MultipleChoice => {
            let mut by_elem: BTreeMap<&Id, Vec<usize>> = BTreeMap::new();
            for (i, op) in ops.iter().enumerate() {
                by_elem.entry(subject(op)?).or_default().push(i);
            }
            by_elem.into_values().collect()
        }
    };
    let slots = groups
        .iter()
        .map(|g| {
            std::iter::once(SlotOption::keep(0, vec![]))
                .chain(g.iter().map(|&i| SlotOption::change(ops[i].profit.tenths(), ops[i].cost.tenths(), vec![])))
                .collect()
        })
        .collect();
    let problem = SlotProblem { slots, capacity: vec![], budget: Budget::at_most(budget.tenths()) };
    let pick = top_picks(&problem, 1).remove(0);
    let chosen: Vec<ChangeOp> = groups
        .iter()
        .zip(&pick.options)
        .filter(|(_, &o)| o > 0)
        .map(|(g, &o)| ops[g[o - 1]].clone())
        .collect();
    let best: Money = groups
        .iter()
        .map(|g| g.iter().map(|&i| ops[i].profit).max().unwrap_or(Money::ZERO).max(Money::ZERO))
        .sum();
    let gain = Money::from_tenths(pick.value);
    Ok(RestructurePlan {
        solution: Solution::Partition(apply_moves(x1, &chosen)?),
        cost: Money::from_tenths(pick.cost),
        gain,
        proximity: Proximity::Value { value: best - gain },
        ops: chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::ids;

    fn part(cs: &[&[u32]]) -> Partition {
        Partition::new(
            cs.iter()
                .enumerate()
                .map(|(i, m)| (Id::from(format!("X{}", i + 1)), ids(m.iter()).into_iter().collect())),
        )
        .unwrap()
    }

    #[test]
    fn moves_between_labeled_partitions() {
        let x1 = part(&[&[1, 3, 8], &[2, 4, 7], &[5, 6, 9]]);
        let x2 = part(&[&[2, 3], &[5, 7, 8], &[1, 4, 6, 9]]);
        let ops = moves_toward(&x1, &x2, &ChangeCosts::uniform(Money::ZERO, Money::ZERO)).unwrap();
        let moved: Vec<String> = ops.iter().map(|o| o.subject.to_string()).collect();
        assert_eq!(moved, ["1", "2", "4", "5", "8"]);
        let all = restructure_clustering(&x1, &ops, Money::ZERO, ClusteringModel::Knapsack).unwrap();
        assert_eq!(all.solution, Solution::Partition(x2));
        assert_eq!(all.proximity, Proximity::Value { value: Money::ZERO });
    }

    #[test]
    fn budget_zero_with_costly_moves_keeps_partition() {
        let x1 = part(&[&[1, 2], &[3]]);
        let op = ChangeOp::new(ChangeKind::MoveBetweenClusters, Id::from(1u32), Money::from_units(1))
            .moving("X1", "X2")
            .with_profit(Money::from_units(2));
        let plan = restructure_clustering(&x1, std::slice::from_ref(&op), Money::ZERO, ClusteringModel::Knapsack).unwrap();
        assert_eq!(plan.solution, Solution::Partition(x1.clone()));
        assert!(matches!(
            restructure_clustering(&x1, &[op.clone(), op], Money::ZERO, ClusteringModel::Knapsack),
            Err(Error::InvalidOps(_))
        ));
    }

    #[test]
    fn choice_model_takes_one_move_per_element() {
        let x1 = part(&[&[1], &[2], &[3]]);
        let mv = |to: &str, p: i64| {
            ChangeOp::new(ChangeKind::MoveBetweenClusters, Id::from(1u32), Money::from_units(1))
                .moving("X1", to)
                .with_profit(Money::from_units(p))
        };
        let plan = restructure_clustering(&x1, &[mv("X2", 1), mv("X3", 3)], Money::from_units(5), ClusteringModel::MultipleChoice)
            .unwrap();
        assert_eq!(plan.ops.len(), 1);
        assert_eq!(plan.gain, Money::from_units(3));
    }
}
