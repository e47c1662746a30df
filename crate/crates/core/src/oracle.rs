//! Exhaustive reference implementations for small instances.
//!
//! Each oracle enumerates its whole search space and applies the same
//! tie-break rule as the corresponding solver, so canonical optima (not
//! just objective values) can be compared.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::restructure::{
    layer_distance, ChangeCosts, ChangeOp, ClusteringModel, LayeredRanking, MoveCosts, Partition, Solution, Subject,
    TreeProximity,
};
use crate::restructure::{apply_moves, AssignmentState};
use crate::scales::{dominates_min, Dominance};
use crate::solvers::{
    AssignmentInstance, EdgeKey, GroupSelection, KnapsackInstance, MultipleChoiceInstance, Permutation,
    SubsetSolution, TreeSolution, WeightedGraph,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport<T> {
    pub objective: Money,
    /// Number of solutions attaining the objective.
    pub optima: u64,
    pub canonical: T,
    /// Size of the enumerated search space.
    pub enumerated: u64,
}

pub const KNAPSACK_CAP: usize = 24;
pub const RESTRUCTURE_CAP: usize = 20;
pub const PARETO_CAP: usize = 100_000;
pub const PERMUTATION_CAP: usize = 9;
pub const SPANNING_CAP: u64 = 2_000_000;

fn too_large(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::TooLarge { what, size: size as u64, cap: cap as u64 });
    }
    Ok(())
}

/// Keeps the best candidate under a key (smaller is better) and counts how
/// many candidates share the best primary objective.
struct Best<K: Ord, T> {
    best: Option<(K, T)>,
    objective: Option<i64>,
    optima: u64,
    enumerated: u64,
}

impl<K: Ord, T> Best<K, T> {
    fn new() -> Self {
        Best { best: None, objective: None, optima: 0, enumerated: 0 }
    }

    /// `objective` is maximized; `key` breaks ties and must start with it.
    fn offer(&mut self, objective: i64, key: K, item: T) {
        match self.objective {
            Some(o) if objective < o => {}
            Some(o) if objective == o => self.optima += 1,
            _ => {
                self.objective = Some(objective);
                self.optima = 1;
            }
        }
        if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
            self.best = Some((key, item));
        }
    }

    fn finish(self, what: &str) -> Result<OracleReport<T>> {
        let (_, canonical) = self.best.ok_or_else(|| Error::Infeasible(format!("no feasible {what}")))?;
        Ok(OracleReport {
            objective: Money::from_tenths(self.objective.expect("set with best")),
            optima: self.optima,
            canonical,
            enumerated: self.enumerated,
        })
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Every subset of items; maximum profit, then lexicographically smallest
/// sorted id list.
pub fn oracle_knapsack(inst: &KnapsackInstance) -> Result<OracleReport<SubsetSolution>> {
    inst.validate()?;
    too_large("knapsack item count", inst.items.len(), KNAPSACK_CAP)?;
    let mut best = Best::new();
    for pick in subsets(inst.items.len()) {
        best.enumerated += 1;
        let weight: Money = pick.iter().map(|&i| inst.items[i].weight).sum();
        if weight > inst.capacity {
            continue;
        }
        let profit: Money = pick.iter().map(|&i| inst.items[i].profit).sum();
        let ids: Vec<Id> = {
            let mut v: Vec<Id> = pick.iter().map(|&i| inst.items[i].id.clone()).collect();
            v.sort();
            v
        };
        best.offer(profit.tenths(), (-profit.tenths(), ids.clone()), ids);
    }
    let r = best.finish("subset")?;
    let sol = inst.evaluate(&r.canonical.iter().cloned().collect())?;
    Ok(OracleReport { objective: r.objective, optima: r.optima, canonical: sol, enumerated: r.enumerated })
}

/// Every selection of at most one item per group.
pub fn oracle_multiple_choice(inst: &MultipleChoiceInstance) -> Result<OracleReport<GroupSelection>> {
    inst.validate()?;
    let size: usize = inst.groups.iter().map(|g| g.items.len() + 1).product();
    too_large("multiple-choice selection count", size, 1 << RESTRUCTURE_CAP)?;
    let mut best = Best::new();
    let radix: Vec<usize> = inst.groups.iter().map(|g| g.items.len() + 1).collect();
    for pick in mixed_radix(&radix) {
        best.enumerated += 1;
        let chosen: Vec<(usize, usize)> =
            pick.iter().enumerate().filter(|(_, &o)| o > 0).map(|(g, &o)| (g, o - 1)).collect();
        let item = |&(g, i): &(usize, usize)| &inst.groups[g].items[i];
        let weight: Money = chosen.iter().map(|c| item(c).weight).sum();
        if weight > inst.capacity {
            continue;
        }
        let profit: Money = chosen.iter().map(|c| item(c).profit).sum();
        let mut ids: Vec<Id> = chosen.iter().map(|c| item(c).id.clone()).collect();
        ids.sort();
        let map: BTreeMap<Id, Id> =
            chosen.iter().map(|c| (inst.groups[c.0].id.clone(), item(c).id.clone())).collect();
        best.offer(profit.tenths(), (-profit.tenths(), ids), map);
    }
    let r = best.finish("selection")?;
    let sol = inst.evaluate(&r.canonical)?;
    Ok(OracleReport { objective: r.objective, optima: r.optima, canonical: sol, enumerated: r.enumerated })
}

fn mixed_radix(radix: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radix.iter().product();
    (0..total).map(move |mut n| {
        radix
            .iter()
            .rev()
            .map(|&r| {
                let d = n % r;
                n /= r;
                d
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect()
    })
}

/// Every permutation in lexicographic order; the first maximum wins.
pub fn oracle_assignment(inst: &AssignmentInstance) -> Result<OracleReport<Permutation>> {
    inst.validate()?;
    let n = inst.size();
    too_large("assignment size", n, PERMUTATION_CAP)?;
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut best = Best::new();
    loop {
        best.enumerated += 1;
        let p = Permutation(perm.clone());
        let v = inst.value(&p);
        best.offer(v.tenths(), (-v.tenths(), perm.clone()), p);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.finish("permutation")
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn is_spanning_tree(edges: &[&EdgeKey], span: &BTreeSet<Id>) -> bool {
    if edges.len() + 1 != span.len().max(1) {
        return false;
    }
    let index: BTreeMap<&Id, usize> = span.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut comp: Vec<usize> = (0..span.len()).collect();
    for e in edges {
        let (Some(&a), Some(&b)) = (index.get(&e.0), index.get(&e.1)) else { return false };
        let (ca, cb) = (comp[a], comp[b]);
        if ca == cb {
            return false;
        }
        for c in comp.iter_mut() {
            if *c == ca {
                *c = cb;
            }
        }
    }
    true
}

/// All spanning trees of the subgraph induced by `span`.
fn spanning_trees(g: &WeightedGraph, span: &BTreeSet<Id>, mut visit: impl FnMut(BTreeSet<EdgeKey>, Money)) -> Result<u64> {
    let edges: Vec<(EdgeKey, Money)> = {
        let mut v: Vec<(EdgeKey, Money)> = g
            .edges
            .iter()
            .filter(|e| span.contains(&e.u) && span.contains(&e.v))
            .map(|e| (e.key(), e.weight))
            .collect();
        v.sort();
        v
    };
    let k = span.len().saturating_sub(1);
    let size = binomial(edges.len() as u64, k as u64);
    if size > SPANNING_CAP {
        return Err(Error::TooLarge { what: "edge subset count", size, cap: SPANNING_CAP });
    }
    combinations(edges.len(), k, |pick| {
        let keys: Vec<&EdgeKey> = pick.iter().map(|&i| &edges[i].0).collect();
        if is_spanning_tree(&keys, span) {
            visit(keys.into_iter().cloned().collect(), pick.iter().map(|&i| edges[i].1).sum());
        }
    });
    Ok(size)
}

/// Every edge subset of size `|A| - 1`; minimum weight, then the
/// lexicographically smallest sorted edge list.
pub fn oracle_spanning_tree(g: &WeightedGraph) -> Result<OracleReport<TreeSolution>> {
    g.validate()?;
    let mut best = Best::new();
    let n = spanning_trees(g, &g.vertices, |edges, w| {
        best.offer(-w.tenths(), (w, edges.clone()), TreeSolution { edges, steiner: BTreeSet::new(), weight: w });
    })?;
    best.enumerated = n;
    let mut r = best.finish("spanning tree").map_err(|_| Error::NoSpanningTree)?;
    r.objective = -r.objective;
    Ok(r)
}

/// Every Steiner subset with every tree over it; minimum weight, then
/// smallest Steiner set, then smallest edge list.
pub fn oracle_steiner_tree(g: &WeightedGraph, terminals: &BTreeSet<Id>) -> Result<OracleReport<TreeSolution>> {
    g.validate()?;
    let candidates: Vec<Id> = g.all_vertices().difference(terminals).cloned().collect();
    too_large("Steiner candidate set", candidates.len(), 12)?;
    let mut best = Best::new();
    let mut enumerated = 0;
    for pick in subsets(candidates.len()) {
        let used: BTreeSet<Id> = pick.iter().map(|&i| candidates[i].clone()).collect();
        let span: BTreeSet<Id> = terminals.union(&used).cloned().collect();
        enumerated += spanning_trees(g, &span, |edges, w| {
            best.offer(
                -w.tenths(),
                (w, used.clone(), edges.clone()),
                TreeSolution { edges, steiner: used.clone(), weight: w },
            );
        })?;
    }
    best.enumerated = enumerated;
    let mut r = best.finish("Steiner tree")?;
    r.objective = -r.objective;
    Ok(r)
}

/// Indices of the vectors no other vector dominates (minimization), by
/// comparing all pairs.
pub fn oracle_pareto<T: Ord>(vectors: &[Vec<T>]) -> Result<OracleReport<Vec<usize>>> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    too_large("Pareto candidate count", vectors.len(), PARETO_CAP)?;
    let mut front = Vec::new();
    for (i, a) in vectors.iter().enumerate() {
        let mut dominated = false;
        for (j, b) in vectors.iter().enumerate() {
            if i != j && dominates_min(b, a)? == Dominance::Dominates {
                dominated = true;
                break;
            }
        }
        if !dominated {
            front.push(i);
        }
    }
    Ok(OracleReport {
        objective: Money::from_units(front.len() as i64),
        optima: front.len() as u64,
        canonical: front,
        enumerated: vectors.len() as u64,
    })
}

/// A restructuring problem in oracle form.
#[derive(Debug, Clone)]
pub enum RestructureCase<'a> {
    Knapsack {
        s0: &'a BTreeSet<Id>,
        goal: &'a KnapsackInstance,
        costs: &'a ChangeCosts,
        fixed: &'a BTreeSet<Id>,
    },
    MultipleChoice {
        current: &'a BTreeMap<Id, Id>,
        goal: &'a MultipleChoiceInstance,
        costs: &'a ChangeCosts,
    },
    Assignment {
        current: &'a AssignmentState,
        ops: &'a [ChangeOp],
    },
    Clustering {
        x1: &'a Partition,
        ops: &'a [ChangeOp],
        model: ClusteringModel,
    },
    Tree {
        t1: &'a TreeSolution,
        goal: &'a WeightedGraph,
        edge_costs: &'a ChangeCosts<EdgeKey>,
        steiner_costs: &'a ChangeCosts,
        proximity: TreeProximity,
        target: &'a TreeSolution,
    },
    Ranking {
        r1: &'a LayeredRanking,
        r2: &'a LayeredRanking,
        costs: &'a MoveCosts,
    },
}

/// One enumerated outcome. `objective` is maximized; `key` orders ties.
struct Candidate {
    solution: Solution,
    objective: i64,
    cost: Money,
    key: Vec<i64>,
}

/// Every change-operation subset of the case, checked for feasibility and
/// budget; best by the shared restructuring tie-break. The objective is the
/// plan's gain for value cases and its negated proximity for tree and
/// ranking cases.
pub fn oracle_restructure(case: &RestructureCase, budget: Money) -> Result<OracleReport<Solution>> {
    let mut best: Best<(i64, Vec<i64>, Money), Solution> = Best::new();
    let strict = matches!(case, RestructureCase::Ranking { .. }) && budget > Money::ZERO;
    enumerate_case(case, &mut |c| {
        best.enumerated += 1;
        let fits = if strict { c.cost < budget } else { c.cost <= budget };
        if fits {
            best.offer(c.objective, (-c.objective, c.key, c.cost), c.solution);
        }
    })?;
    best.finish("restructuring within budget")
}

/// Cheapest change cost of any feasible outcome, ignoring the budget.
pub fn oracle_min_budget(case: &RestructureCase) -> Result<Option<Money>> {
    let mut min: Option<Money> = None;
    enumerate_case(case, &mut |c| {
        min = Some(min.map_or(c.cost, |m| m.min(c.cost)));
    })?;
    Ok(min)
}

fn enumerate_case(case: &RestructureCase, visit: &mut dyn FnMut(Candidate)) -> Result<()> {
    match case {
        RestructureCase::Knapsack { s0, goal, costs, fixed } => knapsack_case(s0, goal, costs, fixed, visit),
        RestructureCase::MultipleChoice { current, goal, costs } => choice_case(current, goal, costs, visit),
        RestructureCase::Assignment { current, ops } => assignment_case(current, ops, visit),
        RestructureCase::Clustering { x1, ops, model } => clustering_case(x1, ops, *model, visit),
        RestructureCase::Tree { t1, goal, edge_costs, steiner_costs, proximity, target } => {
            tree_case(t1, goal, edge_costs, steiner_costs, *proximity, target, visit)
        }
        RestructureCase::Ranking { r1, r2, costs } => ranking_case(r1, r2, costs, visit),
    }
}

/// Tie-break tail: op count, then the touched positions.
fn touch_key(touched: &[i64]) -> Vec<i64> {
    std::iter::once(touched.len() as i64).chain(touched.iter().copied()).collect()
}

fn knapsack_case(
    s0: &BTreeSet<Id>,
    goal: &KnapsackInstance,
    costs: &ChangeCosts,
    fixed: &BTreeSet<Id>,
    visit: &mut dyn FnMut(Candidate),
) -> Result<()> {
    goal.validate()?;
    let items = goal.by_id();
    if let Some(stray) = fixed.iter().find(|id| !s0.contains(*id) || !items.contains_key(id)) {
        return Err(Error::InvalidInstance(format!("fixed element {stray} must be current and present at the goal")));
    }
    let universe: Vec<&Id> = s0.iter().chain(items.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    // (universe position, is deletion, cost)
    let mut forced = Vec::new();
    let mut optional = Vec::new();
    for (pos, &id) in universe.iter().enumerate() {
        if s0.contains(id) {
            if fixed.contains(id) {
                continue;
            }
            match (costs.delete_cost(id), items.contains_key(id)) {
                (h, false) => forced.push((pos, true, h.unwrap_or(Money::ZERO))),
                (Some(h), true) => optional.push((pos, true, h)),
                (None, true) => {}
            }
        } else if let Some(h) = costs.add_cost(id) {
            optional.push((pos, false, h));
        }
    }
    too_large("change-operation universe", optional.len(), RESTRUCTURE_CAP)?;
    let kept: Money = s0.iter().filter_map(|id| items.get(id)).map(|it| it.profit).sum();
    for pick in subsets(optional.len()) {
        let ops: Vec<&(usize, bool, Money)> = forced.iter().chain(pick.iter().map(|&i| &optional[i])).collect();
        let mut ids = s0.clone();
        for &&(pos, del, _) in &ops {
            if del {
                ids.remove(universe[pos]);
            } else {
                ids.insert(universe[pos].clone());
            }
        }
        let sol = goal.evaluate(&ids)?;
        if sol.weight > goal.capacity {
            continue;
        }
        let mut touched: Vec<i64> = ops.iter().map(|o| o.0 as i64).collect();
        touched.sort();
        visit(Candidate {
            objective: (sol.profit - kept).tenths(),
            cost: ops.iter().map(|o| o.2).sum(),
            key: touch_key(&touched),
            solution: Solution::Subset(sol),
        });
    }
    Ok(())
}

fn choice_case(
    current: &BTreeMap<Id, Id>,
    goal: &MultipleChoiceInstance,
    costs: &ChangeCosts,
    visit: &mut dyn FnMut(Candidate),
) -> Result<()> {
    goal.validate()?;
    if let Some(g) = current.keys().find(|g| goal.group(g).is_none()) {
        return Err(Error::InvalidInstance(format!("group {g} does not exist at the goal stage")));
    }
    // per group: list of (resulting item position or None, cost); entry 0 is "no change" when possible
    let mut options: Vec<Vec<(Option<usize>, Money, bool)>> = Vec::new();
    let mut kept = Money::ZERO;
    let mut universe = 0;
    for group in &goal.groups {
        let cur = current.get(&group.id);
        let cur_pos = cur.and_then(|c| group.items.iter().position(|it| &it.id == c));
        let mut opts = Vec::new();
        let out = match (cur, cur_pos) {
            (None, _) => Some(Money::ZERO),
            (Some(c), Some(p)) => {
                kept += group.items[p].profit;
                opts.push((Some(p), Money::ZERO, false));
                costs.delete_cost(c)
            }
            (Some(c), None) => Some(costs.delete_cost(c).unwrap_or(Money::ZERO)),
        };
        if cur.is_none() {
            opts.push((None, Money::ZERO, false));
        } else if let Some(h) = out {
            opts.push((None, h, true));
        }
        for (p, it) in group.items.iter().enumerate() {
            if Some(p) == cur_pos {
                continue;
            }
            if let (Some(o), Some(a)) = (out, costs.add_cost(&it.id)) {
                opts.push((Some(p), o + a, true));
            }
        }
        universe += opts.iter().filter(|o| o.2).count();
        options.push(opts);
    }
    too_large("change-operation universe", universe, RESTRUCTURE_CAP)?;
    if options.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let radix: Vec<usize> = options.iter().map(Vec::len).collect();
    for pick in mixed_radix(&radix) {
        let chosen: Vec<&(Option<usize>, Money, bool)> = pick.iter().enumerate().map(|(g, &o)| &options[g][o]).collect();
        let map: BTreeMap<Id, Id> = goal
            .groups
            .iter()
            .zip(&chosen)
            .filter_map(|(g, c)| c.0.map(|p| (g.id.clone(), g.items[p].id.clone())))
            .collect();
        let sel = goal.evaluate(&map)?;
        if sel.weight > goal.capacity {
            continue;
        }
        let touched: Vec<i64> =
            chosen.iter().enumerate().filter(|(_, c)| c.2).map(|(g, _)| g as i64).collect();
        let mut key = touch_key(&touched);
        let cost: Money = chosen.iter().map(|c| c.1).sum();
        key.push(cost.tenths());
        // within a group an emptied slot sorts before any item, items by position
        key.extend(chosen.iter().map(|c| c.0.map_or(-1, |p| p as i64)));
        visit(Candidate { objective: (sel.profit - kept).tenths(), cost, key, solution: Solution::Selection(sel) });
    }
    Ok(())
}

fn assignment_case(current: &AssignmentState, ops: &[ChangeOp], visit: &mut dyn FnMut(Candidate)) -> Result<()> {
    too_large("change-operation universe", ops.len(), RESTRUCTURE_CAP)?;
    let mut seen = BTreeSet::new();
    for op in ops {
        if !seen.insert(&op.subject) {
            return Err(Error::InvalidOps(format!("element {} is moved by more than one op", op.subject)));
        }
    }
    for pick in subsets(ops.len()) {
        let mut state = current.clone();
        for &i in &pick {
            if let (Subject::Element(e), Some(to)) = (&ops[i].subject, &ops[i].to) {
                state.positions.insert(e.clone(), to.clone());
            }
        }
        let load = state.load();
        if state.capacity.iter().any(|(p, &c)| load.get(p).copied().unwrap_or(0) > c) {
            continue;
        }
        let touched: Vec<i64> = pick.iter().map(|&i| i as i64).collect();
        visit(Candidate {
            objective: pick.iter().map(|&i| ops[i].profit).sum::<Money>().tenths(),
            cost: pick.iter().map(|&i| ops[i].cost).sum(),
            key: touch_key(&touched),
            solution: Solution::Assignment(state),
        });
    }
    Ok(())
}

fn clustering_case(x1: &Partition, ops: &[ChangeOp], model: ClusteringModel, visit: &mut dyn FnMut(Candidate)) -> Result<()> {
    too_large("change-operation universe", ops.len(), RESTRUCTURE_CAP)?;
    // slot of each op: its own index, or its element's rank
    let elements: BTreeMap<&Subject, usize> = {
        let set: BTreeSet<&Subject> = ops.iter().map(|o| &o.subject).collect();
        set.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
    };
    if model == ClusteringModel::Knapsack && elements.len() != ops.len() {
        return Err(Error::InvalidOps("an element is moved by more than one op".into()));
    }
    for pick in subsets(ops.len()) {
        let chosen: Vec<ChangeOp> = pick.iter().map(|&i| ops[i].clone()).collect();
        let subjects: BTreeSet<&Subject> = chosen.iter().map(|o| &o.subject).collect();
        if subjects.len() != chosen.len() {
            continue;
        }
        let part = apply_moves(x1, &chosen)?;
        let (touched, tail): (Vec<i64>, Vec<i64>) = match model {
            ClusteringModel::Knapsack => (pick.iter().map(|&i| i as i64).collect(), vec![]),
            ClusteringModel::MultipleChoice => {
                let mut by_slot: Vec<(i64, i64)> =
                    pick.iter().map(|&i| (elements[&ops[i].subject] as i64, i as i64)).collect();
                by_slot.sort();
                by_slot.into_iter().unzip()
            }
        };
        let cost: Money = chosen.iter().map(|o| o.cost).sum();
        let mut key = touch_key(&touched);
        key.push(cost.tenths());
        key.extend(tail);
        visit(Candidate {
            objective: chosen.iter().map(|o| o.profit).sum::<Money>().tenths(),
            cost,
            key,
            solution: Solution::Partition(part),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn tree_case(
    t1: &TreeSolution,
    goal: &WeightedGraph,
    edge_costs: &ChangeCosts<EdgeKey>,
    steiner_costs: &ChangeCosts,
    proximity: TreeProximity,
    target: &TreeSolution,
    visit: &mut dyn FnMut(Candidate),
) -> Result<()> {
    goal.validate()?;
    too_large("change-operation universe", goal.edges.len() + goal.steiner.len(), RESTRUCTURE_CAP)?;
    let z: Vec<&Id> = goal.steiner.iter().collect();
    let goal_edges = goal.weights();
    for pick in subsets(z.len()) {
        let used: BTreeSet<Id> = pick.iter().map(|&i| z[i].clone()).collect();
        let mut base = Money::ZERO;
        let mut ok = true;
        for v in t1.steiner.difference(&used) {
            match steiner_costs.delete_cost(v).or((!goal.steiner.contains(v)).then_some(Money::ZERO)) {
                Some(h) => base += h,
                None => ok = false,
            }
        }
        for v in used.difference(&t1.steiner) {
            match steiner_costs.add_cost(v) {
                Some(h) => base += h,
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let vertex_ops = t1.steiner.symmetric_difference(&used).count() as i64;
        let span: BTreeSet<Id> = goal.vertices.union(&used).cloned().collect();
        let mut found = Vec::new();
        spanning_trees(goal, &span, |edges, w| found.push((edges, w)))?;
        for (edges, w) in found {
            let mut cost = base;
            let mut avail = true;
            for e in t1.edges.difference(&edges) {
                match edge_costs.delete_cost(e).or((!goal_edges.contains_key(e)).then_some(Money::ZERO)) {
                    Some(h) => cost += h,
                    None => avail = false,
                }
            }
            for e in edges.difference(&t1.edges) {
                match edge_costs.add_cost(e) {
                    Some(h) => cost += h,
                    None => avail = false,
                }
            }
            if !avail {
                continue;
            }
            let rho = match proximity {
                TreeProximity::EdgeSymmetricDifference => edges.symmetric_difference(&target.edges).count() as i64 * 10,
                TreeProximity::WeightDelta => (w - target.weight).abs().tenths(),
            };
            let ops = vertex_ops + t1.edges.symmetric_difference(&edges).count() as i64;
            // (rho, cost, ops, steiner set, edges) with rho first via objective
            let mut key = vec![cost.tenths(), ops];
            key.extend(rank_ids(&used, &z));
            key.push(i64::MAX);
            key.extend(rank_edges(&edges, &goal_edges));
            visit(Candidate {
                objective: -rho,
                cost,
                key,
                solution: Solution::Tree(TreeSolution { edges, steiner: used.clone(), weight: w }),
            });
        }
    }
    Ok(())
}

/// Sorted positions of `set` within `universe` (lexicographic set order).
fn rank_ids(set: &BTreeSet<Id>, universe: &[&Id]) -> Vec<i64> {
    set.iter().map(|v| universe.iter().position(|u| *u == v).unwrap_or(usize::MAX) as i64).collect()
}

fn rank_edges(set: &BTreeSet<EdgeKey>, all: &BTreeMap<EdgeKey, Money>) -> Vec<i64> {
    set.iter().map(|e| all.keys().position(|k| k == e).unwrap_or(usize::MAX) as i64).collect()
}

fn ranking_case(r1: &LayeredRanking, r2: &LayeredRanking, costs: &MoveCosts, visit: &mut dyn FnMut(Candidate)) -> Result<()> {
    layer_distance(r1, r2)?;
    let k = r1.layers.len();
    let start: Vec<(Id, usize)> = r1.positions().into_iter().collect();
    too_large("change-operation universe", start.len() * k.saturating_sub(1), RESTRUCTURE_CAP)?;
    let radix = vec![k; start.len()];
    for pick in mixed_radix(&radix) {
        let mut layers = vec![BTreeSet::new(); k];
        let mut cost = Money::ZERO;
        let mut touched = Vec::new();
        let mut dest = Vec::new();
        for (i, ((e, at), &l)) in start.iter().zip(&pick).enumerate() {
            let to = l + 1;
            layers[l].insert(e.clone());
            if to != *at {
                cost += costs.cost(e, *at, to);
                touched.push(i as i64);
                dest.push(to as i64);
            }
        }
        let r = LayeredRanking { layers };
        let delta = layer_distance(&r, r2)?;
        let mut key = touch_key(&touched);
        key.push(cost.tenths());
        key.extend(dest);
        visit(Candidate {
            objective: -i64::from(delta) * 10,
            cost,
            key,
            solution: Solution::Ranking(r),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Item;

    fn m(s: &str) -> Money {
        s.parse().unwrap()
    }

    #[test]
    fn knapsack_by_hand() {
        let inst = KnapsackInstance {
            items: vec![Item::new(1, m("1"), m("1")), Item::new(2, m("2"), m("1")), Item::new(3, m("3"), m("3"))],
            capacity: m("2"),
        };
        let r = oracle_knapsack(&inst).unwrap();
        assert_eq!(r.objective, m("3"));
        assert_eq!(r.enumerated, 8);
        assert_eq!(r.canonical.ids, [Id::from(1u32), Id::from(2u32)].into_iter().collect());
        let empty = oracle_knapsack(&KnapsackInstance { items: vec![], capacity: m("1") }).unwrap();
        assert_eq!((empty.objective, empty.optima), (Money::ZERO, 1));
    }

    #[test]
    fn pareto_keeps_equal_vectors() {
        let r = oracle_pareto(&[vec![1, 2], vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(r.canonical, vec![0, 1]);
        assert_eq!(oracle_pareto(&[vec![5]]).unwrap().canonical, vec![0]);
        assert!(matches!(oracle_pareto::<i32>(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn permutations_in_order() {
        let inst = AssignmentInstance {
            profit: vec![
                vec![m("1"), m("2"), m("3")],
                vec![m("3"), m("1"), m("2")],
                vec![m("2"), m("3"), m("1")],
            ],
        };
        let r = oracle_assignment(&inst).unwrap();
        assert_eq!(r.objective, m("9"));
        assert_eq!(r.canonical, Permutation(vec![3, 1, 2]));
        assert_eq!(r.enumerated, 6);
    }

    #[test]
    fn caps_are_enforced() {
        let items = (0..25).map(|i| Item::new(i, m("1"), m("1"))).collect();
        assert!(matches!(
            oracle_knapsack(&KnapsackInstance { items, capacity: m("1") }),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 4), 0);
    }
}
