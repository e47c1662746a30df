//! Trajectories of restructured solutions over a sequence of stages.
//!
//! Stage 0 holds the initial solution; stages `1..=n` each carry a goal
//! instance and a budget. Three ways of building the trajectory are offered:
//! a greedy chain, a composition of per-stage candidate sets chosen by
//! dynamic programming, and a tree of alternatives filtered by Pareto rule.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::restructure::{
    hmmd_plan, knapsack_transition, multiple_choice_transition, ranking_budget_admits, ranking_transition,
    restructure_hmmd, restructure_knapsack_top, restructure_multiple_choice_top, restructure_ranking_top,
    restructure_steiner_top, restructure_tree_top, tree_transition, ChangeCosts, HmmdBudget, KnapsackObjective,
    LayeredRanking, MoveCosts, Proximity, RestructurePlan, Solution, TreeProximity,
};
use crate::scales::pareto_front_min;
use crate::solvers::{EdgeKey, KnapsackInstance, MorphSystem, MultipleChoiceInstance, TreeSolution, WeightedGraph};

/// Problem-specific restructuring between consecutive stages.
pub trait StageRestructurer {
    /// Number of goal stages `n` (stages are numbered `1..=n`).
    fn stage_count(&self) -> usize;

    /// Up to `q` best plans from `from` toward stage `stage` within budget,
    /// best first.
    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>>;

    /// The plan turning `from` into `to` at stage `stage`, or `None` when
    /// some required change is unavailable. Budget is not checked.
    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>>;

    fn admits(&self, cost: Money, budget: Money) -> bool {
        cost <= budget
    }
}

/// Change cost and proximity summed over a trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Aggregate {
    pub cost: Money,
    pub proximity: Vec<Money>,
}

impl Aggregate {
    /// Weighted-sum scalarization with unit weights.
    pub fn scalar(&self) -> Money {
        self.cost + self.proximity.iter().copied().sum::<Money>()
    }

    pub fn vector(&self) -> Vec<Money> {
        std::iter::once(self.cost).chain(self.proximity.iter().copied()).collect()
    }

    pub fn combine(&self, other: &Aggregate) -> Result<Aggregate> {
        let proximity = match (self.proximity.is_empty(), other.proximity.is_empty()) {
            (true, _) => other.proximity.clone(),
            (_, true) => self.proximity.clone(),
            _ if self.proximity.len() == other.proximity.len() => {
                self.proximity.iter().zip(&other.proximity).map(|(a, b)| *a + *b).collect()
            }
            _ => return Err(Error::ScaleMismatch("proximity vectors differ in length".into())),
        };
        Ok(Aggregate { cost: self.cost + other.cost, proximity })
    }
}

/// Sum per-stage change costs and proximity vectors.
pub fn aggregate_parts<'a>(parts: impl IntoIterator<Item = (Money, &'a Proximity)>) -> Result<Aggregate> {
    parts.into_iter().try_fold(Aggregate::default(), |acc, (cost, p)| {
        acc.combine(&Aggregate { cost, proximity: p.components() })
    })
}

/// Initial solution followed by one restructuring plan per stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Solution,
    pub steps: Vec<RestructurePlan>,
}

impl Trajectory {
    pub fn solutions(&self) -> impl Iterator<Item = &Solution> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|p| &p.solution))
    }

    pub fn last(&self) -> &Solution {
        self.steps.last().map_or(&self.start, |p| &p.solution)
    }
}

pub fn aggregate(traj: &Trajectory) -> Result<Aggregate> {
    aggregate_parts(traj.steps.iter().map(|p| (p.cost, &p.proximity)))
}

/// Per-stage candidate plans of a composed trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagePlanSet {
    pub stage: usize,
    pub candidates: Vec<Solution>,
}

fn check_budgets(r: &dyn StageRestructurer, budgets: &[Money]) -> Result<()> {
    if r.stage_count() == 0 {
        return Err(Error::EmptyInput);
    }
    if budgets.len() != r.stage_count() {
        return Err(Error::InvalidInstance(format!(
            "{} budgets given for {} stages",
            budgets.len(),
            r.stage_count()
        )));
    }
    if let Some(b) = budgets.iter().find(|b| b.is_negative()) {
        return Err(Error::InvalidInstance(format!("budget {b} is negative")));
    }
    Ok(())
}

/// Greedy chain: each stage restructures the previous stage's result under
/// its own budget.
pub fn scheme1_series(r: &dyn StageRestructurer, s0: &Solution, budgets: &[Money]) -> Result<Trajectory> {
    check_budgets(r, budgets)?;
    let mut traj = Trajectory { start: s0.clone(), steps: Vec::new() };
    for (i, &b) in budgets.iter().enumerate() {
        let stage = i + 1;
        let plan = r
            .candidates(stage, traj.last(), b, 1)
            .map_err(|e| e.at_stage(stage))?
            .into_iter()
            .next()
            .ok_or_else(|| Error::Infeasible("no plan".into()).at_stage(stage))?;
        traj.steps.push(plan);
    }
    Ok(traj)
}

struct Node {
    plan: RestructurePlan,
    pred: usize,
    acc: Aggregate,
}

/// Composition: per stage, collect the best `q_i` plans out of every
/// candidate of the previous stage, then choose one candidate per stage
/// minimizing `H̃ + Σρ̃` by dynamic programming over predecessors. With all
/// `q_i = 1` this is exactly the greedy chain. Ties keep the earliest
/// candidate.
pub fn scheme2_compose(
    r: &dyn StageRestructurer,
    s0: &Solution,
    budgets: &[Money],
    q: &[usize],
) -> Result<(Trajectory, Vec<StagePlanSet>)> {
    check_budgets(r, budgets)?;
    if q.len() != budgets.len() || q.contains(&0) {
        return Err(Error::InvalidInstance("need one candidate count >= 1 per stage".into()));
    }
    let mut layers: Vec<Vec<Node>> = Vec::new();
    for (i, (&b, &qi)) in budgets.iter().zip(q).enumerate() {
        let stage = i + 1;
        let preds: Vec<(&Solution, Aggregate)> = match layers.last() {
            None => vec![(s0, Aggregate::default())],
            Some(l) => l.iter().map(|n| (&n.plan.solution, n.acc.clone())).collect(),
        };
        // candidate pool in generation order, remembering who generated it
        let mut pool: Vec<(RestructurePlan, usize)> = Vec::new();
        let mut first_err = None;
        for (j, (from, _)) in preds.iter().enumerate() {
            match r.candidates(stage, from, b, qi) {
                Ok(plans) => {
                    for p in plans {
                        if !pool.iter().any(|(x, _)| x.solution == p.solution) {
                            pool.push((p, j));
                        }
                    }
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        if pool.is_empty() {
            let e = first_err.unwrap_or_else(|| Error::Infeasible("no candidate plan".into()));
            return Err(e.at_stage(stage));
        }
        let mut layer = Vec::new();
        for (plan, origin) in pool {
            let mut best: Option<Node> = None;
            for (j, (from, acc)) in preds.iter().enumerate() {
                let step = if j == origin {
                    Some(plan.clone())
                } else {
                    r.transition(stage, from, &plan.solution)
                        .map_err(|e| e.at_stage(stage))?
                        .filter(|p| r.admits(p.cost, b))
                };
                let Some(step) = step else { continue };
                let acc = acc.combine(&Aggregate { cost: step.cost, proximity: step.proximity.components() })?;
                if best.as_ref().is_none_or(|n| acc.scalar() < n.acc.scalar()) {
                    best = Some(Node { plan: step, pred: j, acc });
                }
            }
            layer.push(best.expect("the generating predecessor always reaches its candidate"));
        }
        layers.push(layer);
    }
    let last = layers.last().expect("at least one stage");
    let mut at = (0..last.len())
        .min_by(|&a, &b| last[a].acc.scalar().cmp(&last[b].acc.scalar()).then(a.cmp(&b)))
        .expect("non-empty layer");
    let mut steps = Vec::new();
    for layer in layers.iter().rev() {
        steps.push(layer[at].plan.clone());
        at = layer[at].pred;
    }
    steps.reverse();
    let sets = layers
        .iter()
        .enumerate()
        .map(|(i, l)| StagePlanSet { stage: i + 1, candidates: l.iter().map(|n| n.plan.solution.clone()).collect() })
        .collect();
    Ok((Trajectory { start: s0.clone(), steps }, sets))
}

pub const TRAJECTORY_CAP: usize = 100_000;

/// All trajectories of the candidate tree: each solution of stage `i - 1`
/// branches into its best `q_i` plans. Branches that become infeasible are
/// dropped.
pub fn scheme3_trajectories(
    r: &dyn StageRestructurer,
    s0: &Solution,
    budgets: &[Money],
    q: &[usize],
) -> Result<Vec<Trajectory>> {
    check_budgets(r, budgets)?;
    if q.len() != budgets.len() || q.contains(&0) {
        return Err(Error::InvalidInstance("need one candidate count >= 1 per stage".into()));
    }
    let mut frontier = vec![Trajectory { start: s0.clone(), steps: Vec::new() }];
    for (i, (&b, &qi)) in budgets.iter().zip(q).enumerate() {
        let stage = i + 1;
        let mut next = Vec::new();
        let mut first_err = None;
        for t in &frontier {
            match r.candidates(stage, t.last(), b, qi) {
                Ok(plans) => {
                    for p in plans {
                        let mut t = t.clone();
                        t.steps.push(p);
                        next.push(t);
                    }
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
            if next.len() > TRAJECTORY_CAP {
                return Err(Error::TooLarge { what: "trajectory tree", size: next.len() as u64, cap: TRAJECTORY_CAP as u64 });
            }
        }
        if next.is_empty() {
            let e = first_err.unwrap_or_else(|| Error::Infeasible("no candidate plan".into()));
            return Err(e.at_stage(stage));
        }
        frontier = next;
    }
    Ok(frontier)
}

/// Trajectories not dominated in `(H̃, ρ̃)`, in input order.
pub fn scheme3_select(trajectories: &[Trajectory]) -> Result<Vec<Trajectory>> {
    if trajectories.is_empty() {
        return Err(Error::EmptyInput);
    }
    let vectors: Vec<Vec<Money>> = trajectories.iter().map(|t| aggregate(t).map(|a| a.vector())).collect::<Result<_>>()?;
    if vectors.iter().any(|v| v.len() != vectors[0].len()) {
        return Err(Error::ScaleMismatch("trajectories aggregate to different proximity shapes".into()));
    }
    let keep: BTreeSet<usize> = pareto_front_min(&vectors)?.into_iter().collect();
    Ok(keep.into_iter().map(|i| trajectories[i].clone()).collect())
}

fn wrong(kind: &str, s: &Solution) -> Error {
    Error::InvalidChoice(format!("expected a {kind} solution, got {s}"))
}

fn stage_of<T>(stages: &[T], stage: usize) -> Result<&T> {
    stage
        .checked_sub(1)
        .and_then(|i| stages.get(i))
        .ok_or_else(|| Error::InvalidInstance(format!("no stage {stage}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackStage {
    pub instance: KnapsackInstance,
    pub costs: ChangeCosts,
    #[serde(default)]
    pub fixed: BTreeSet<Id>,
}

#[derive(Debug, Clone)]
pub struct KnapsackStages {
    pub stages: Vec<KnapsackStage>,
    pub objective: KnapsackObjective,
}

impl StageRestructurer for KnapsackStages {
    fn stage_count(&self) -> usize {
        self.stages.len()
    }

    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let Solution::Subset(s) = from else { return Err(wrong("subset", from)) };
        restructure_knapsack_top(&s.ids, &st.instance, &st.costs, &st.fixed, budget, self.objective, q)
    }

    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let (Solution::Subset(a), Solution::Subset(b)) = (from, to) else { return Err(wrong("subset", from)) };
        knapsack_transition(&a.ids, &b.ids, &st.instance, &st.costs, &st.fixed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceStage {
    pub instance: MultipleChoiceInstance,
    pub costs: ChangeCosts,
}

#[derive(Debug, Clone)]
pub struct ChoiceStages {
    pub stages: Vec<ChoiceStage>,
}

impl StageRestructurer for ChoiceStages {
    fn stage_count(&self) -> usize {
        self.stages.len()
    }

    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let Solution::Selection(s) = from else { return Err(wrong("selection", from)) };
        restructure_multiple_choice_top(&s.chosen, &st.instance, &st.costs, budget, q)
    }

    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let (Solution::Selection(a), Solution::Selection(b)) = (from, to) else {
            return Err(wrong("selection", from));
        };
        multiple_choice_transition(&a.chosen, &b.chosen, &st.instance, &st.costs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStage {
    pub graph: WeightedGraph,
    pub edge_costs: ChangeCosts<EdgeKey>,
    #[serde(default)]
    pub steiner_costs: ChangeCosts,
    #[serde(default)]
    pub proximity: TreeProximity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TreeSolution>,
}

/// Spanning-tree stages; a stage whose graph lists Steiner candidates is
/// treated as a Steiner-tree stage.
#[derive(Debug, Clone)]
pub struct TreeStages {
    pub stages: Vec<TreeStage>,
}

impl StageRestructurer for TreeStages {
    fn stage_count(&self) -> usize {
        self.stages.len()
    }

    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let Solution::Tree(t) = from else { return Err(wrong("tree", from)) };
        if st.graph.steiner.is_empty() {
            restructure_tree_top(&t.edges, &st.graph, &st.edge_costs, budget, st.proximity, st.target.as_ref(), q)
        } else {
            restructure_steiner_top(t, &st.graph, &st.edge_costs, &st.steiner_costs, budget, st.proximity, st.target.as_ref(), q)
        }
    }

    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let (Solution::Tree(a), Solution::Tree(b)) = (from, to) else { return Err(wrong("tree", from)) };
        tree_transition(a, b, &st.graph, &st.edge_costs, &st.steiner_costs, st.proximity, st.target.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingStage {
    pub goal: LayeredRanking,
    pub costs: MoveCosts,
}

#[derive(Debug, Clone)]
pub struct RankingStages {
    pub stages: Vec<RankingStage>,
}

impl StageRestructurer for RankingStages {
    fn stage_count(&self) -> usize {
        self.stages.len()
    }

    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let Solution::Ranking(r) = from else { return Err(wrong("ranking", from)) };
        restructure_ranking_top(r, &st.goal, &st.costs, budget, q)
    }

    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let (Solution::Ranking(a), Solution::Ranking(b)) = (from, to) else { return Err(wrong("ranking", from)) };
        ranking_transition(a, b, &st.goal, &st.costs).map(Some)
    }

    fn admits(&self, cost: Money, budget: Money) -> bool {
        ranking_budget_admits(cost, budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmmdStage {
    pub system: MorphSystem,
    /// Money costs per alternative; without them the budget counts
    /// replaced components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<ChangeCosts>,
}

impl HmmdStage {
    fn budget(&self, budget: Money) -> HmmdBudget {
        match &self.costs {
            Some(costs) => HmmdBudget::Money { limit: budget, costs: costs.clone() },
            None => HmmdBudget::Ops { limit: u32::try_from(budget.tenths().max(0) / 10).unwrap_or(u32::MAX) },
        }
    }
}

/// Morphological stages. Candidates are the Pareto plans over
/// `(H, ρ₁, ρ₂)` ranked by `H + ρ₁ + ρ₂`, then by `H`.
#[derive(Debug, Clone)]
pub struct HmmdStages {
    pub stages: Vec<HmmdStage>,
}

impl StageRestructurer for HmmdStages {
    fn stage_count(&self) -> usize {
        self.stages.len()
    }

    fn candidates(&self, stage: usize, from: &Solution, budget: Money, q: usize) -> Result<Vec<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let Solution::Composite(c) = from else { return Err(wrong("composite", from)) };
        let mut front = restructure_hmmd(&c.choice, &st.system, &st.budget(budget))?;
        // stable: equal scalars keep the (H, ρ) order of the front
        front.sort_by_key(|p| p.cost + p.proximity.scalar());
        front.truncate(q);
        Ok(front)
    }

    fn transition(&self, stage: usize, from: &Solution, to: &Solution) -> Result<Option<RestructurePlan>> {
        let st = stage_of(&self.stages, stage)?;
        let (Solution::Composite(a), Solution::Composite(b)) = (from, to) else {
            return Err(wrong("composite", from));
        };
        let budget = st.budget(Money::MAX);
        match hmmd_plan(&a.choice, &st.system, &b.choice, &budget) {
            Ok(p) if admissible(&p) => Ok(Some(p)),
            Ok(_) => Ok(None),
            Err(Error::InvalidChoice(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn admissible(p: &RestructurePlan) -> bool {
    match &p.solution {
        Solution::Composite(c) => c.quality.w.value() >= 1,
        _ => true,
    }
}
