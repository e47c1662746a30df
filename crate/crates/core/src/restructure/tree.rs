use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_budget, ChangeCosts, ChangeKind, ChangeOp, Proximity, RestructurePlan, Solution};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::solvers::{minimum_spanning_tree, steiner_tree, EdgeKey, TreeSolution, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeProximity {
    /// Number of edges in exactly one of the two trees.
    #[default]
    EdgeSymmetricDifference,
    /// Absolute difference of total weights.
    WeightDelta,
}

pub const TREE_VERTEX_CAP: usize = 10;
pub const STEINER_RESTRUCTURE_CAP: usize = 10;

/// Reference the proximity is measured against.
enum Reference<'a> {
    Edges(&'a BTreeSet<EdgeKey>),
    Weight(i64),
}

struct Found {
    rho: i64,
    cost: i64,
    ops: usize,
    steiner: BTreeSet<Id>,
    edges: BTreeSet<EdgeKey>,
    weight: i64,
}

impl Found {
    fn key(&self) -> (i64, i64, usize, &BTreeSet<Id>, &BTreeSet<EdgeKey>) {
        (self.rho, self.cost, self.ops, &self.steiner, &self.edges)
    }
}

struct Search<'a> {
    edges: Vec<(EdgeKey, i64)>,
    index: BTreeMap<&'a Id, usize>,
    current: &'a BTreeSet<EdgeKey>,
    costs: &'a ChangeCosts<EdgeKey>,
    reference: Reference<'a>,
    /// Reference edges outside the candidate edge list; always mismatched.
    rho_base: i64,
    budget: i64,
    need: usize,
    suffix_min_w: Vec<i64>,
    q: usize,
    steiner: BTreeSet<Id>,
    base_cost: i64,
    base_ops: usize,
    out: Vec<Found>,
}

impl Search<'_> {
    fn run(&mut self) {
        let parent: Vec<usize> = (0..self.index.len()).collect();
        let mut chosen = Vec::new();
        self.dfs(0, &parent, &mut chosen, self.base_cost, self.base_ops, self.rho_base, 0);
    }

    fn find(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }

    fn lower_bound(&self, depth: usize, rho: i64, weight: i64, taken: usize) -> i64 {
        match self.reference {
            Reference::Edges(_) => rho,
            Reference::Weight(target) => {
                let rest = (self.need - taken) as i64;
                let floor = if rest == 0 { weight } else { weight + rest * self.suffix_min_w[depth] };
                (floor - target).max(0)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(&mut self, depth: usize, parent: &[usize], chosen: &mut Vec<usize>, cost: i64, ops: usize, rho: i64, weight: i64) {
        if cost > self.budget {
            return;
        }
        let taken = chosen.len();
        if self.edges.len() - depth < self.need - taken {
            return;
        }
        if self.out.len() == self.q && self.lower_bound(depth, rho, weight, taken) > self.out[self.q - 1].rho {
            return;
        }
        if taken == self.need || depth == self.edges.len() {
            if taken < self.need {
                return;
            }
            // every remaining edge is left out
            let mut cost = cost;
            let mut ops = ops;
            let mut rho = rho;
            for (e, _) in &self.edges[depth..] {
                if self.current.contains(e) {
                    match self.costs.delete_cost(e) {
                        Some(h) => {
                            cost += h.tenths();
                            ops += 1;
                        }
                        None => return,
                    }
                }
                if let Reference::Edges(r) = self.reference {
                    rho += i64::from(r.contains(e));
                }
            }
            if cost > self.budget {
                return;
            }
            let rho = match self.reference {
                Reference::Edges(_) => rho,
                Reference::Weight(target) => (weight - target).abs(),
            };
            let found = Found {
                rho,
                cost,
                ops,
                steiner: self.steiner.clone(),
                edges: chosen.iter().map(|&i| self.edges[i].0.clone()).collect(),
                weight,
            };
            let at = self.out.partition_point(|f| f.key() < found.key());
            if at < self.q {
                self.out.insert(at, found);
                self.out.truncate(self.q);
            }
            return;
        }
        let (e, w) = self.edges[depth].clone();
        let in_current = self.current.contains(&e);
        let in_ref = match self.reference {
            Reference::Edges(r) => r.contains(&e),
            Reference::Weight(_) => false,
        };
        let (a, b) = (self.index[&e.0], self.index[&e.1]);
        let (ra, rb) = (Self::find(parent, a), Self::find(parent, b));
        // include
        if ra != rb {
            let add = if in_current { Some(0) } else { self.costs.add_cost(&e).map(Money::tenths) };
            if let Some(h) = add {
                let mut next = parent.to_vec();
                next[ra] = rb;
                chosen.push(depth);
                let r = rho + i64::from(matches!(self.reference, Reference::Edges(_)) && !in_ref);
                self.dfs(depth + 1, &next, chosen, cost + h, ops + usize::from(!in_current), r, weight + w);
                chosen.pop();
            }
        }
        // exclude
        let drop = if in_current { self.costs.delete_cost(&e).map(Money::tenths) } else { Some(0) };
        if let Some(h) = drop {
            self.dfs(depth + 1, parent, chosen, cost + h, ops + usize::from(in_current), rho + i64::from(in_ref), weight);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn search_span(
    g: &WeightedGraph,
    span: &BTreeSet<Id>,
    current: &BTreeSet<EdgeKey>,
    costs: &ChangeCosts<EdgeKey>,
    reference: &Reference,
    budget: i64,
    base_cost: i64,
    base_ops: usize,
    steiner: BTreeSet<Id>,
    q: usize,
) -> Vec<Found> {
    let mut edges: Vec<(EdgeKey, i64)> = g
        .edges
        .iter()
        .filter(|e| span.contains(&e.u) && span.contains(&e.v))
        .map(|e| (e.key(), e.weight.tenths()))
        .collect();
    edges.sort();
    // current edges that cannot survive are deleted up front
    let mut base_cost = base_cost;
    let mut base_ops = base_ops;
    for e in current {
        if !edges.iter().any(|(k, _)| k == e) {
            base_cost += costs.delete_cost(e).map_or(0, Money::tenths);
            base_ops += 1;
        }
    }
    let rho_base = match reference {
        Reference::Edges(r) => r.iter().filter(|e| !edges.iter().any(|(k, _)| k == *e)).count() as i64,
        Reference::Weight(_) => 0,
    };
    let mut suffix_min_w = vec![i64::MAX; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        suffix_min_w[i] = suffix_min_w[i + 1].min(edges[i].1);
    }
    let reference = match reference {
        Reference::Edges(r) => Reference::Edges(r),
        Reference::Weight(w) => Reference::Weight(*w),
    };
    let mut s = Search {
        index: span.iter().enumerate().map(|(i, v)| (v, i)).collect(),
        need: span.len().saturating_sub(1),
        edges,
        current,
        costs,
        reference,
        rho_base,
        budget,
        suffix_min_w,
        q,
        steiner,
        base_cost,
        base_ops,
        out: Vec::new(),
    };
    s.run();
    s.out
}

fn edge_ops(
    current: &BTreeSet<EdgeKey>,
    next: &BTreeSet<EdgeKey>,
    costs: &ChangeCosts<EdgeKey>,
) -> Vec<ChangeOp> {
    let del = current.difference(next).map(|e| {
        ChangeOp::new(ChangeKind::DeleteElement, e.clone(), costs.delete_cost(e).unwrap_or(Money::ZERO))
    });
    let add = next.difference(current).map(|e| {
        ChangeOp::new(ChangeKind::AddElement, e.clone(), costs.add_cost(e).unwrap_or(Money::ZERO))
    });
    del.chain(add).collect()
}

fn proximity(kind: TreeProximity, rho: i64) -> Proximity {
    match kind {
        TreeProximity::EdgeSymmetricDifference => Proximity::Count { count: rho as u32 },
        TreeProximity::WeightDelta => Proximity::Value { value: Money::from_tenths(rho) },
    }
}

fn rho_of(kind: TreeProximity, edges: &BTreeSet<EdgeKey>, weight: Money, target: &TreeSolution) -> i64 {
    match kind {
        TreeProximity::EdgeSymmetricDifference => edges.symmetric_difference(&target.edges).count() as i64,
        TreeProximity::WeightDelta => (weight - target.weight).abs().tenths(),
    }
}

/// Change `t1` into a spanning tree of `goal` within `budget`, as close as
/// possible to `target` (the goal's minimum spanning tree when absent).
///
/// Keeping an edge is free; deleting costs `h⁻`, adding costs `h⁺`. Edges
/// of `t1` missing from the goal graph are deleted at their listed cost (or
/// for free). Ties go to lower cost, then fewer operations, then the
/// lexicographically smaller edge set.
pub fn restructure_tree(
    t1: &BTreeSet<EdgeKey>,
    goal: &WeightedGraph,
    costs: &ChangeCosts<EdgeKey>,
    budget: Money,
    kind: TreeProximity,
    target: Option<&TreeSolution>,
) -> Result<RestructurePlan> {
    let mut plans = restructure_tree_top(t1, goal, costs, budget, kind, target, 1)?;
    Ok(plans.remove(0))
}

pub fn restructure_tree_top(
    t1: &BTreeSet<EdgeKey>,
    goal: &WeightedGraph,
    costs: &ChangeCosts<EdgeKey>,
    budget: Money,
    kind: TreeProximity,
    target: Option<&TreeSolution>,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    goal.validate()?;
    costs.validate()?;
    check_budget(budget)?;
    if goal.vertices.len() > TREE_VERTEX_CAP {
        return Err(Error::TooLarge {
            what: "tree restructuring vertex set",
            size: goal.vertices.len() as u64,
            cap: TREE_VERTEX_CAP as u64,
        });
    }
    let mst;
    let target = match target {
        Some(t) => t,
        None => {
            mst = minimum_spanning_tree(goal)?;
            &mst
        }
    };
    let reference = match kind {
        TreeProximity::EdgeSymmetricDifference => Reference::Edges(&target.edges),
        TreeProximity::WeightDelta => Reference::Weight(target.weight.tenths()),
    };
    let found = search_span(goal, &goal.vertices, t1, costs, &reference, budget.tenths(), 0, 0, BTreeSet::new(), q.max(1));
    if found.is_empty() {
        let cheapest = search_span(goal, &goal.vertices, t1, costs, &reference, i64::MAX / 4, 0, 0, BTreeSet::new(), usize::MAX)
            .iter()
            .map(|f| f.cost)
            .min();
        if cheapest.is_none() && minimum_spanning_tree(goal).is_err() {
            return Err(Error::NoSpanningTree);
        }
        return Err(Error::InfeasibleWithBudget { budget, min_budget: cheapest.map(Money::from_tenths) });
    }
    let start_rho = goal
        .tree_weight(t1)
        .ok()
        .filter(|_| goal.is_tree_over(t1, &goal.vertices))
        .map(|w| rho_of(kind, t1, w, target));
    Ok(found
        .into_iter()
        .map(|f| RestructurePlan {
            ops: edge_ops(t1, &f.edges, costs),
            cost: Money::from_tenths(f.cost),
            gain: start_rho.map_or(Money::ZERO, |s| Money::from_tenths(s - f.rho)),
            proximity: proximity(kind, f.rho),
            solution: Solution::Tree(TreeSolution {
                edges: f.edges,
                steiner: BTreeSet::new(),
                weight: Money::from_tenths(f.weight),
            }),
        })
        .collect())
}

/// Steiner-tree variant: the terminals are the goal graph's required
/// vertices, the goal graph's Steiner candidates may join or leave the tree
/// at `w⁺`/`w⁻` from `steiner_costs`. The default target is the goal-stage
/// minimum Steiner tree.
#[allow(clippy::too_many_arguments)]
pub fn restructure_steiner(
    s1: &TreeSolution,
    goal: &WeightedGraph,
    edge_costs: &ChangeCosts<EdgeKey>,
    steiner_costs: &ChangeCosts,
    budget: Money,
    kind: TreeProximity,
    target: Option<&TreeSolution>,
) -> Result<RestructurePlan> {
    let mut plans = restructure_steiner_top(s1, goal, edge_costs, steiner_costs, budget, kind, target, 1)?;
    Ok(plans.remove(0))
}

#[allow(clippy::too_many_arguments)]
pub fn restructure_steiner_top(
    s1: &TreeSolution,
    goal: &WeightedGraph,
    edge_costs: &ChangeCosts<EdgeKey>,
    steiner_costs: &ChangeCosts,
    budget: Money,
    kind: TreeProximity,
    target: Option<&TreeSolution>,
    q: usize,
) -> Result<Vec<RestructurePlan>> {
    goal.validate()?;
    edge_costs.validate()?;
    steiner_costs.validate()?;
    check_budget(budget)?;
    if goal.steiner.len() > STEINER_RESTRUCTURE_CAP {
        return Err(Error::TooLarge {
            what: "Steiner candidate set",
            size: goal.steiner.len() as u64,
            cap: STEINER_RESTRUCTURE_CAP as u64,
        });
    }
    if goal.vertices.len() + goal.steiner.len() > TREE_VERTEX_CAP + STEINER_RESTRUCTURE_CAP {
        return Err(Error::TooLarge {
            what: "tree restructuring vertex set",
            size: (goal.vertices.len() + goal.steiner.len()) as u64,
            cap: (TREE_VERTEX_CAP + STEINER_RESTRUCTURE_CAP) as u64,
        });
    }
    let best;
    let target = match target {
        Some(t) => t,
        None => {
            best = steiner_tree(goal, &goal.vertices)?;
            &best
        }
    };
    let reference = match kind {
        TreeProximity::EdgeSymmetricDifference => Reference::Edges(&target.edges),
        TreeProximity::WeightDelta => Reference::Weight(target.weight.tenths()),
    };
    let q = q.max(1);
    let z: Vec<&Id> = goal.steiner.iter().collect();
    let run = |limit: i64, q: usize| -> Vec<Found> {
        let mut all: Vec<Found> = Vec::new();
        for mask in 0u32..(1 << z.len()) {
            let used: BTreeSet<Id> =
                z.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| (*v).clone()).collect();
            let mut cost = 0;
            let mut ops = 0;
            let mut ok = true;
            for v in s1.steiner.difference(&used) {
                // a vertex gone from the graph leaves for free
                match steiner_costs.delete_cost(v).or((!goal.steiner.contains(v)).then_some(Money::ZERO)) {
                    Some(h) => cost += h.tenths(),
                    None => ok = false,
                }
                ops += 1;
            }
            for v in used.difference(&s1.steiner) {
                match steiner_costs.add_cost(v) {
                    Some(h) => cost += h.tenths(),
                    None => ok = false,
                }
                ops += 1;
            }
            if !ok || cost > limit {
                continue;
            }
            let span: BTreeSet<Id> = goal.vertices.union(&used).cloned().collect();
            all.extend(search_span(goal, &span, &s1.edges, edge_costs, &reference, limit, cost, ops, used, q));
        }
        all.sort_by(|a, b| a.key().cmp(&b.key()));
        all.truncate(q);
        all
    };
    let found = run(budget.tenths(), q);
    if found.is_empty() {
        let cheapest = run(i64::MAX / 4, usize::MAX).iter().map(|f| f.cost).min();
        return Err(Error::InfeasibleWithBudget { budget, min_budget: cheapest.map(Money::from_tenths) });
    }
    let start_rho = goal
        .tree_weight(&s1.edges)
        .ok()
        .filter(|_| {
            s1.steiner.is_subset(&goal.steiner)
                && goal.is_tree_over(&s1.edges, &goal.vertices.union(&s1.steiner).cloned().collect())
        })
        .map(|w| rho_of(kind, &s1.edges, w, target));
    Ok(found
        .into_iter()
        .map(|f| {
            let mut ops: Vec<ChangeOp> = s1
                .steiner
                .difference(&f.steiner)
                .map(|v| {
                    ChangeOp::new(ChangeKind::DeleteSteinerVertex, v.clone(), steiner_costs.delete_cost(v).unwrap_or(Money::ZERO))
                })
                .chain(f.steiner.difference(&s1.steiner).map(|v| {
                    ChangeOp::new(ChangeKind::AddSteinerVertex, v.clone(), steiner_costs.add_cost(v).unwrap_or(Money::ZERO))
                }))
                .collect();
            ops.extend(edge_ops(&s1.edges, &f.edges, edge_costs));
            RestructurePlan {
                ops,
                cost: Money::from_tenths(f.cost),
                gain: start_rho.map_or(Money::ZERO, |s| Money::from_tenths(s - f.rho)),
                proximity: proximity(kind, f.rho),
                solution: Solution::Tree(TreeSolution {
                    edges: f.edges,
                    steiner: f.steiner,
                    weight: Money::from_tenths(f.weight),
                }),
            }
        })
        .collect())
}

/// The plan that turns `from` into exactly `to` (trees of the goal graph,
/// Steiner vertices included); `None` when a needed change has no listed
/// cost. Budget is not checked. `target` defaults to the goal-stage optimum.
#[allow(clippy::too_many_arguments)]
pub fn tree_transition(
    from: &TreeSolution,
    to: &TreeSolution,
    goal: &WeightedGraph,
    edge_costs: &ChangeCosts<EdgeKey>,
    steiner_costs: &ChangeCosts,
    kind: TreeProximity,
    target: Option<&TreeSolution>,
) -> Result<Option<RestructurePlan>> {
    goal.validate()?;
    let span: BTreeSet<Id> = goal.vertices.union(&to.steiner).cloned().collect();
    if !to.steiner.is_subset(&goal.steiner) || !goal.is_tree_over(&to.edges, &span) {
        return Err(Error::InvalidChoice("destination is not a tree of the goal graph".into()));
    }
    let computed;
    let target = match target {
        Some(t) => t,
        None => {
            computed = if goal.steiner.is_empty() {
                minimum_spanning_tree(goal)?
            } else {
                steiner_tree(goal, &goal.vertices)?
            };
            &computed
        }
    };
    let goal_edges = goal.weights();
    let mut ops = Vec::new();
    for v in from.steiner.difference(&to.steiner) {
        let h = match steiner_costs.delete_cost(v) {
            Some(h) => h,
            None if !goal.steiner.contains(v) => Money::ZERO,
            None => return Ok(None),
        };
        ops.push(ChangeOp::new(ChangeKind::DeleteSteinerVertex, v.clone(), h));
    }
    for v in to.steiner.difference(&from.steiner) {
        let Some(h) = steiner_costs.add_cost(v) else { return Ok(None) };
        ops.push(ChangeOp::new(ChangeKind::AddSteinerVertex, v.clone(), h));
    }
    for e in from.edges.difference(&to.edges) {
        let h = match edge_costs.delete_cost(e) {
            Some(h) => h,
            None if !goal_edges.contains_key(e) => Money::ZERO,
            None => return Ok(None),
        };
        ops.push(ChangeOp::new(ChangeKind::DeleteElement, e.clone(), h));
    }
    for e in to.edges.difference(&from.edges) {
        let Some(h) = edge_costs.add_cost(e) else { return Ok(None) };
        ops.push(ChangeOp::new(ChangeKind::AddElement, e.clone(), h));
    }
    let weight = goal.tree_weight(&to.edges)?;
    let from_rho = goal
        .tree_weight(&from.edges)
        .ok()
        .filter(|_| {
            from.steiner.is_subset(&goal.steiner)
                && goal.is_tree_over(&from.edges, &goal.vertices.union(&from.steiner).cloned().collect())
        })
        .map(|w| rho_of(kind, &from.edges, w, target));
    let rho = rho_of(kind, &to.edges, weight, target);
    Ok(Some(RestructurePlan {
        cost: ops.iter().map(|op| op.cost).sum(),
        gain: from_rho.map_or(Money::ZERO, |s| Money::from_tenths(s - rho)),
        proximity: proximity(kind, rho),
        solution: Solution::Tree(TreeSolution { edges: to.edges.clone(), steiner: to.steiner.clone(), weight }),
        ops,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Edge;

    fn m(u: i64) -> Money {
        Money::from_units(u)
    }

    fn square() -> WeightedGraph {
        WeightedGraph {
            vertices: ["a", "b", "c", "d"].into_iter().map(Id::from).collect(),
            steiner: BTreeSet::new(),
            edges: vec![
                Edge::new("a", "b", m(1)),
                Edge::new("b", "c", m(1)),
                Edge::new("c", "d", m(1)),
                Edge::new("a", "d", m(5)),
            ],
        }
    }

    fn keys(v: &[(&str, &str)]) -> BTreeSet<EdgeKey> {
        v.iter().map(|(a, b)| EdgeKey::new(*a, *b)).collect()
    }

    #[test]
    fn zero_budget_keeps_valid_tree() {
        let t1 = keys(&[("a", "b"), ("b", "c"), ("a", "d")]);
        let costs = ChangeCosts::uniform(m(1), m(1));
        let plan = restructure_tree(&t1, &square(), &costs, Money::ZERO, TreeProximity::EdgeSymmetricDifference, None)
            .unwrap();
        assert!(plan.is_empty());
        assert_eq!(plan.proximity, Proximity::Count { count: 2 });
    }

    #[test]
    fn one_swap_reaches_mst() {
        let t1 = keys(&[("a", "b"), ("b", "c"), ("a", "d")]);
        let costs = ChangeCosts::uniform(m(1), m(1));
        let plan = restructure_tree(&t1, &square(), &costs, m(2), TreeProximity::WeightDelta, None).unwrap();
        let Solution::Tree(t) = &plan.solution else { panic!() };
        assert_eq!(t.edges, keys(&[("a", "b"), ("b", "c"), ("c", "d")]));
        assert_eq!(plan.proximity, Proximity::Value { value: Money::ZERO });
        assert_eq!(plan.cost, m(2));
        assert_eq!(plan.gain, m(4));
    }

    #[test]
    fn infeasible_reports_cheapest_budget() {
        // (a,d) is gone from the graph; connecting d needs one addition
        let t1 = keys(&[("a", "b"), ("b", "c"), ("a", "d")]);
        let mut g = square();
        g.edges.pop();
        let costs = ChangeCosts::uniform(m(1), m(3));
        let err = restructure_tree(&t1, &g, &costs, m(1), TreeProximity::EdgeSymmetricDifference, None).unwrap_err();
        assert!(matches!(err, Error::InfeasibleWithBudget { min_budget: Some(b), .. } if b == m(4)));
    }

    #[test]
    fn steiner_vertex_swap() {
        let g = WeightedGraph {
            vertices: ["1", "2", "3"].into_iter().map(Id::from).collect(),
            steiner: ["s", "t"].into_iter().map(Id::from).collect(),
            edges: vec![
                Edge::new("1", "s", m(5)),
                Edge::new("2", "s", m(5)),
                Edge::new("3", "s", m(5)),
                Edge::new("1", "t", m(1)),
                Edge::new("2", "t", m(1)),
                Edge::new("3", "t", m(1)),
                Edge::new("1", "2", m(9)),
                Edge::new("2", "3", m(9)),
            ],
        };
        let s1 = TreeSolution {
            edges: keys(&[("1", "s"), ("2", "s"), ("3", "s")]),
            steiner: ["s".into()].into_iter().collect(),
            weight: m(15),
        };
        let plan = restructure_steiner(
            &s1,
            &g,
            &ChangeCosts::uniform(m(0), m(0)),
            &ChangeCosts::uniform(m(1), m(1)),
            m(2),
            TreeProximity::WeightDelta,
            None,
        )
        .unwrap();
        let Solution::Tree(t) = &plan.solution else { panic!() };
        assert_eq!(t.steiner, ["t".into()].into_iter().collect());
        assert_eq!(plan.proximity, Proximity::Value { value: Money::ZERO });
        // one unit short of a swap: adding t while keeping s still helps
        let plan = restructure_steiner(
            &s1,
            &g,
            &ChangeCosts::uniform(m(0), m(0)),
            &ChangeCosts::uniform(m(1), m(1)),
            m(1),
            TreeProximity::WeightDelta,
            None,
        )
        .unwrap();
        let Solution::Tree(t) = &plan.solution else { panic!() };
        assert_eq!(t.steiner, ["s".into(), "t".into()].into_iter().collect());
        assert_eq!(t.weight, m(8));
    }
}
