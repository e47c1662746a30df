use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::solvers::knapsack::Item;

/// One group `A_i`; a solution takes at most one of its items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McGroup {
    pub id: Id,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipleChoiceInstance {
    pub groups: Vec<McGroup>,
    pub capacity: Money,
}

/// At most one item per group, keyed by group id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSelection {
    pub chosen: BTreeMap<Id, Id>,
    pub profit: Money,
    pub weight: Money,
}

impl GroupSelection {
    pub fn items(&self) -> BTreeSet<Id> {
        self.chosen.values().cloned().collect()
    }
}

impl MultipleChoiceInstance {
    pub fn validate(&self) -> Result<()> {
        if self.capacity.is_negative() {
            return Err(Error::InvalidInstance(format!("negative capacity {}", self.capacity)));
        }
        let mut groups = BTreeSet::new();
        let mut items = BTreeSet::new();
        for g in &self.groups {
            if !groups.insert(&g.id) {
                return Err(Error::InvalidInstance(format!("duplicate group id {}", g.id)));
            }
            for it in &g.items {
                if !items.insert(&it.id) {
                    return Err(Error::InvalidInstance(format!(
                        "item {} appears in more than one group",
                        it.id
                    )));
                }
                if it.weight.is_negative() {
                    return Err(Error::InvalidInstance(format!(
                        "item {} has negative weight",
                        it.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self, id: &Id) -> Option<&McGroup> {
        self.groups.iter().find(|g| &g.id == id)
    }

    /// Totals for a group-to-item map. Capacity is not checked.
    pub fn evaluate(&self, chosen: &BTreeMap<Id, Id>) -> Result<GroupSelection> {
        let mut profit = Money::ZERO;
        let mut weight = Money::ZERO;
        for (g, item) in chosen {
            let group = self
                .group(g)
                .ok_or_else(|| Error::InvalidChoice(format!("unknown group {g}")))?;
            let it = group
                .items
                .iter()
                .find(|it| &it.id == item)
                .ok_or_else(|| Error::InvalidChoice(format!("item {item} is not in group {g}")))?;
            profit += it.profit;
            weight += it.weight;
        }
        Ok(GroupSelection {
            chosen: chosen.clone(),
            profit,
            weight,
        })
    }
}

/// Maximum-profit selection with at most one item per group.
///
/// Depth-first over groups in instance order; each group contributes an
/// optimistic bound of its best affordable profit. Ties resolve to the
/// lexicographically smallest sorted item-id sequence.
pub fn solve_multiple_choice(inst: &MultipleChoiceInstance) -> Result<GroupSelection> {
    inst.validate()?;
    let mut search = McSearch {
        inst,
        capacity: inst.capacity.tenths(),
        best_profit: 0,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    search.dfs(0, 0, 0);
    let chosen = search
        .best
        .iter()
        .map(|&(g, i)| (inst.groups[g].id.clone(), inst.groups[g].items[i].id.clone()))
        .collect();
    inst.evaluate(&chosen)
}

struct McSearch<'a> {
    inst: &'a MultipleChoiceInstance,
    capacity: i64,
    best_profit: i64,
    best: Vec<(usize, usize)>,
    chosen: Vec<(usize, usize)>,
}

impl McSearch<'_> {
    fn sorted_ids(&self, sel: &[(usize, usize)]) -> Vec<&Id> {
        let mut v: Vec<&Id> = sel
            .iter()
            .map(|&(g, i)| &self.inst.groups[g].items[i].id)
            .collect();
        v.sort();
        v
    }

    fn bound(&self, from: usize, room: i64) -> i64 {
        self.inst.groups[from..]
            .iter()
            .map(|g| {
                g.items
                    .iter()
                    .filter(|it| it.weight.tenths() <= room)
                    .map(|it| it.profit.tenths())
                    .max()
                    .unwrap_or(0)
                    .max(0)
            })
            .sum()
    }

    fn dfs(&mut self, g: usize, profit: i64, weight: i64) {
        if g == self.inst.groups.len() {
            if profit > self.best_profit
                || (profit == self.best_profit
                    && self.sorted_ids(&self.chosen) < self.sorted_ids(&self.best))
            {
                self.best_profit = profit;
                self.best = self.chosen.clone();
            }
            return;
        }
        if profit + self.bound(g, self.capacity - weight) < self.best_profit {
            return;
        }
        let group = &self.inst.groups[g];
        for (i, it) in group.items.iter().enumerate() {
            let (p, w) = (it.profit.tenths(), it.weight.tenths());
            if p >= 0 && weight + w <= self.capacity {
                self.chosen.push((g, i));
                self.dfs(g + 1, profit + p, weight + w);
                self.chosen.pop();
            }
        }
        self.dfs(g + 1, profit, weight);
    }
}
