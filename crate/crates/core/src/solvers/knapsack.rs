use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;

/// An element with a profit and a resource requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: Id,
    pub profit: Money,
    pub weight: Money,
}

impl Item {
    pub fn new(id: impl Into<Id>, profit: Money, weight: Money) -> Item {
        Item {
            id: id.into(),
            profit,
            weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub items: Vec<Item>,
    pub capacity: Money,
}

/// A chosen subset together with its totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSolution {
    pub ids: BTreeSet<Id>,
    pub profit: Money,
    pub weight: Money,
}

impl KnapsackInstance {
    pub fn validate(&self) -> Result<()> {
        if self.capacity.is_negative() {
            return Err(Error::InvalidInstance(format!(
                "negative capacity {}",
                self.capacity
            )));
        }
        let mut seen = BTreeSet::new();
        for item in &self.items {
            if item.weight.is_negative() {
                return Err(Error::InvalidInstance(format!(
                    "item {} has negative weight {}",
                    item.id, item.weight
                )));
            }
            if !seen.insert(&item.id) {
                return Err(Error::InvalidInstance(format!("duplicate item id {}", item.id)));
            }
        }
        Ok(())
    }

    pub fn item(&self, id: &Id) -> Option<&Item> {
        self.items.iter().find(|it| &it.id == id)
    }

    pub fn by_id(&self) -> BTreeMap<&Id, &Item> {
        self.items.iter().map(|it| (&it.id, it)).collect()
    }

    /// Totals for a subset; errors on unknown ids. Capacity is not checked.
    pub fn evaluate(&self, ids: &BTreeSet<Id>) -> Result<SubsetSolution> {
        let index = self.by_id();
        let mut profit = Money::ZERO;
        let mut weight = Money::ZERO;
        for id in ids {
            let item = index
                .get(id)
                .ok_or_else(|| Error::InvalidChoice(format!("unknown item {id}")))?;
            profit += item.profit;
            weight += item.weight;
        }
        Ok(SubsetSolution {
            ids: ids.clone(),
            profit,
            weight,
        })
    }
}

/// Maximum-profit feasible subset.
///
/// Depth-first branch and bound over items in id order, bounded by the
/// fractional relaxation of the remaining items. Among equal-profit optima
/// the lexicographically smallest sorted id sequence wins; pruning is strict
/// on the bound so every optimum is reachable for that comparison.
pub fn solve_knapsack(inst: &KnapsackInstance) -> Result<SubsetSolution> {
    inst.validate()?;
    let mut items: Vec<&Item> = inst.items.iter().collect();
    items.sort_by(|a, b| a.id.cmp(&b.id));

    // Items ordered by decreasing profit density, for the relaxation bound.
    let mut by_ratio: Vec<usize> = (0..items.len())
        .filter(|&i| items[i].profit > Money::ZERO)
        .collect();
    by_ratio.sort_by(|&a, &b| density_cmp(items[b], items[a]).then(a.cmp(&b)));

    let mut search = Search {
        items: &items,
        by_ratio: &by_ratio,
        capacity: inst.capacity.tenths(),
        best_profit: 0,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    search.dfs(0, 0, 0);

    let ids: BTreeSet<Id> = search.best.iter().map(|&i| items[i].id.clone()).collect();
    inst.evaluate(&ids)
}

fn density_cmp(a: &Item, b: &Item) -> Ordering {
    // a.p / a.w vs b.p / b.w, zero weights being infinitely dense
    let (ap, aw) = (i128::from(a.profit.tenths()), i128::from(a.weight.tenths()));
    let (bp, bw) = (i128::from(b.profit.tenths()), i128::from(b.weight.tenths()));
    match (aw == 0, bw == 0) {
        (true, true) => ap.cmp(&bp),
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => (ap * bw).cmp(&(bp * aw)),
    }
}

struct Search<'a> {
    items: &'a [&'a Item],
    by_ratio: &'a [usize],
    capacity: i64,
    best_profit: i64,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    /// Fractional upper bound on profit obtainable from items `from..`.
    fn bound(&self, from: usize, room: i64) -> i64 {
        let mut room = i128::from(room);
        let mut total: i128 = 0;
        for &i in self.by_ratio {
            if i < from {
                continue;
            }
            let p = i128::from(self.items[i].profit.tenths());
            let w = i128::from(self.items[i].weight.tenths());
            if w <= room {
                room -= w;
                total += p;
            } else {
                total += p * room / w;
                break;
            }
        }
        total as i64
    }

    /// Whether every completion of the current prefix sorts after `best`.
    fn prefix_after_best(&self) -> bool {
        for (k, &c) in self.chosen.iter().enumerate() {
            match self.best.get(k) {
                None => return true,
                Some(&b) if c != b => return c > b,
                _ => {}
            }
        }
        false
    }

    fn dfs(&mut self, idx: usize, profit: i64, weight: i64) {
        if idx == self.items.len() {
            if profit > self.best_profit || (profit == self.best_profit && self.chosen < self.best) {
                self.best_profit = profit;
                self.best = self.chosen.clone();
            }
            return;
        }
        let ub = profit + self.bound(idx, self.capacity - weight);
        if ub < self.best_profit || (ub == self.best_profit && self.prefix_after_best()) {
            return;
        }
        let item = self.items[idx];
        let (p, w) = (item.profit.tenths(), item.weight.tenths());
        if p >= 0 && weight + w <= self.capacity {
            self.chosen.push(idx);
            self.dfs(idx + 1, profit + p, weight + w);
            self.chosen.pop();
        }
        self.dfs(idx + 1, profit, weight);
    }
}
