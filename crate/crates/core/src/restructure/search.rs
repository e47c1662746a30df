//! Budgeted "one option per slot" search shared by the additive restructurers.
//!
//! Every slot offers a list of options; at most one is taken. Option values,
//! costs and loads add up across slots. Results are ranked by
//! `(-value, ops, touched slots, cost, option indices)`.

use std::cmp::Ordering;

#[derive(Debug, Clone)]
pub(crate) struct SlotOption {
    pub value: i64,
    pub cost: i64,
    pub load: Vec<i64>,
    /// False for the "leave as is" option.
    pub op: bool,
}

impl SlotOption {
    pub fn keep(value: i64, load: Vec<i64>) -> SlotOption {
        SlotOption { value, cost: 0, load, op: false }
    }

    pub fn change(value: i64, cost: i64, load: Vec<i64>) -> SlotOption {
        SlotOption { value, cost, load, op: true }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Budget {
    pub limit: i64,
    /// Strict budgets admit only `cost < limit`.
    pub strict: bool,
}

impl Budget {
    pub fn at_most(limit: i64) -> Budget {
        Budget { limit, strict: false }
    }

    pub fn below(limit: i64) -> Budget {
        Budget { limit, strict: true }
    }

    pub fn admits(self, cost: i64) -> bool {
        if self.strict {
            cost < self.limit
        } else {
            cost <= self.limit
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SlotProblem {
    pub slots: Vec<Vec<SlotOption>>,
    pub capacity: Vec<i64>,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pick {
    pub options: Vec<usize>,
    pub value: i64,
    pub cost: i64,
    pub touched: Vec<usize>,
}

impl Pick {
    fn rank(&self, other: &Pick) -> Ordering {
        other
            .value
            .cmp(&self.value)
            .then(self.touched.len().cmp(&other.touched.len()))
            .then_with(|| self.touched.cmp(&other.touched))
            .then(self.cost.cmp(&other.cost))
            .then_with(|| self.options.cmp(&other.options))
    }
}

struct Bounds {
    max_value: Vec<i64>,
    min_cost: Vec<i64>,
    min_load: Vec<Vec<i64>>,
}

/// Best `q` picks in rank order; empty when nothing fits.
pub(crate) fn top_picks(p: &SlotProblem, q: usize) -> Vec<Pick> {
    if q == 0 || p.slots.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let n = p.slots.len();
    let dims = p.capacity.len();
    let mut b = Bounds {
        max_value: vec![0; n + 1],
        min_cost: vec![0; n + 1],
        min_load: vec![vec![0; dims]; n + 1],
    };
    for s in (0..n).rev() {
        let opts = &p.slots[s];
        b.max_value[s] = b.max_value[s + 1] + opts.iter().map(|o| o.value).max().unwrap_or(0);
        b.min_cost[s] = b.min_cost[s + 1] + opts.iter().map(|o| o.cost).min().unwrap_or(0);
        for d in 0..dims {
            b.min_load[s][d] =
                b.min_load[s + 1][d] + opts.iter().map(|o| o.load[d]).min().unwrap_or(0);
        }
    }
    let mut st = State {
        p,
        b,
        q,
        best: Vec::new(),
        options: Vec::with_capacity(n),
        load: vec![0; dims],
    };
    st.dfs(0, 0, 0);
    st.best
}

struct State<'a> {
    p: &'a SlotProblem,
    b: Bounds,
    q: usize,
    best: Vec<Pick>,
    options: Vec<usize>,
    load: Vec<i64>,
}

impl State<'_> {
    fn dfs(&mut self, depth: usize, value: i64, cost: i64) {
        if !self.p.budget.admits(cost + self.b.min_cost[depth]) {
            return;
        }
        if self
            .load
            .iter()
            .zip(&self.b.min_load[depth])
            .zip(&self.p.capacity)
            .any(|((l, m), c)| l + m > *c)
        {
            return;
        }
        if self.best.len() == self.q && value + self.b.max_value[depth] < self.best[self.q - 1].value {
            return;
        }
        if depth == self.p.slots.len() {
            let touched = self
                .options
                .iter()
                .enumerate()
                .filter(|&(s, &o)| self.p.slots[s][o].op)
                .map(|(s, _)| s)
                .collect();
            let pick = Pick { options: self.options.clone(), value, cost, touched };
            let at = self.best.partition_point(|b| b.rank(&pick) == Ordering::Less);
            if at < self.q {
                self.best.insert(at, pick);
                self.best.truncate(self.q);
            }
            return;
        }
        let p = self.p;
        for (i, opt) in p.slots[depth].iter().enumerate() {
            for (l, x) in self.load.iter_mut().zip(&opt.load) {
                *l += x;
            }
            self.options.push(i);
            self.dfs(depth + 1, value + opt.value, cost + opt.cost);
            self.options.pop();
            for (l, x) in self.load.iter_mut().zip(&opt.load) {
                *l -= x;
            }
        }
    }
}

/// Cheapest total cost of any pick that satisfies the loads, ignoring the budget.
pub(crate) fn min_cost(p: &SlotProblem) -> Option<i64> {
    let relaxed = SlotProblem {
        slots: p
            .slots
            .iter()
            .map(|opts| {
                opts.iter()
                    .map(|o| SlotOption { value: -o.cost, ..o.clone() })
                    .collect()
            })
            .collect(),
        capacity: p.capacity.clone(),
        budget: Budget::at_most(i64::MAX / 4),
    };
    top_picks(&relaxed, 1).first().map(|pk| pk.cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(value: i64, cost: i64) -> Vec<SlotOption> {
        vec![SlotOption::keep(0, vec![]), SlotOption::change(value, cost, vec![])]
    }

    #[test]
    fn ranks_fewer_ops_then_earlier_slot() {
        let p = SlotProblem {
            slots: vec![binary(1, 3), binary(1, 2), vec![SlotOption::keep(0, vec![])]],
            capacity: vec![],
            budget: Budget::at_most(3),
        };
        let picks = top_picks(&p, 3);
        assert_eq!(picks[0].options, vec![1, 0, 0]);
        assert_eq!(picks[1].options, vec![0, 1, 0]);
        assert_eq!(picks[2].options, vec![0, 0, 0]);
    }

    #[test]
    fn strict_budget_and_capacity() {
        let p = SlotProblem {
            slots: vec![
                vec![SlotOption::keep(0, vec![0]), SlotOption::change(5, 1, vec![2])],
                vec![SlotOption::keep(0, vec![0]), SlotOption::change(4, 1, vec![1])],
            ],
            capacity: vec![2],
            budget: Budget::below(2),
        };
        let picks = top_picks(&p, 1);
        assert_eq!(picks[0].options, vec![1, 0]);
        assert_eq!(picks[0].value, 5);
    }

    #[test]
    fn nothing_fits() {
        let p = SlotProblem {
            slots: vec![vec![SlotOption::change(1, 5, vec![])]],
            capacity: vec![],
            budget: Budget::at_most(4),
        };
        assert!(top_picks(&p, 2).is_empty());
    }
}
