//! The three commands over a parsed document.

use std::collections::{BTreeMap, BTreeSet};

use restruct_core::multistage::{
    aggregate, scheme1_series, scheme2_compose, scheme3_select, scheme3_trajectories, ChoiceStage, ChoiceStages,
    HmmdStage, HmmdStages, KnapsackStage, KnapsackStages, RankingStage, RankingStages, StageRestructurer, TreeStage,
    TreeStages, Trajectory,
};
use restruct_core::oracle::{
    oracle_assignment, oracle_knapsack, oracle_min_budget, oracle_multiple_choice, oracle_restructure,
    oracle_spanning_tree, oracle_steiner_tree, OracleReport, RestructureCase,
};
use restruct_core::restructure::{
    moves_toward, restructure_assignment_top, restructure_clustering, restructure_hmmd, restructure_knapsack_top,
    restructure_multiple_choice_top, restructure_ranking_top, restructure_steiner_top, restructure_tree_top,
    AssignmentState, ChangeCosts, ChangeKind, ChangeOp, HmmdBudget, KnapsackObjective, RestructurePlan, Solution,
    TreeProximity,
};
use restruct_core::solvers::{
    evaluate_composite, hmmd_synthesize, minimum_spanning_tree, solve_assignment, solve_knapsack,
    solve_multiple_choice, steiner_tree, CompositeSolution, TreeSolution,
};
use restruct_core::{Error, Id, Money};

use crate::document::{AssignmentStageDoc, InstanceDocument, TreeStageDoc};
use crate::error::CliError;
use crate::report::{
    Command, CompositeEntry, OracleVerdict, PlanReport, RunReport, StageReport, TrajectoryReport, Verdict,
};

/// Command-line overrides of document settings.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub budget: Option<Money>,
    pub budgets: Option<Vec<Money>>,
    pub scheme: Option<u8>,
    pub candidates: Option<Vec<usize>>,
    pub objective: Option<KnapsackObjective>,
    pub oracle: bool,
}

fn verdict<T>(o: &OracleReport<T>, solver: Money, canonical: bool) -> OracleVerdict {
    OracleVerdict {
        verdict: if o.objective == solver { Verdict::Match } else { Verdict::Mismatch },
        objective: o.objective,
        solver,
        optima: o.optima,
        enumerated: o.enumerated,
        canonical,
    }
}

fn report(doc: &InstanceDocument, command: Command) -> RunReport {
    RunReport::new(command, doc.kind(), doc.name())
}

/// Optimum of one stage, or of every stage when `stage` is `None`.
pub fn cmd_solve(doc: &InstanceDocument, stage: Option<usize>, ov: &Overrides) -> Result<RunReport, CliError> {
    let indices: Vec<usize> = match stage {
        Some(n) => vec![doc.stage_index(n)?],
        None => (0..doc.stage_count()).collect(),
    };
    let mut out = report(doc, Command::Solve);
    for i in indices {
        out.stages.push(solve_stage(doc, i, ov.oracle)?);
    }
    Ok(out)
}

fn solve_stage(doc: &InstanceDocument, i: usize, oracle: bool) -> Result<StageReport, CliError> {
    let mut r = StageReport {
        stage: doc.first_stage() + i,
        objective: None,
        summary: None,
        solution: None,
        composites: Vec::new(),
        oracle: None,
    };
    let solution = match doc {
        InstanceDocument::Knapsack(d) => {
            let inst = &d.stages[i].instance;
            let s = solve_knapsack(inst)?;
            r.objective = Some(s.profit);
            if oracle {
                let o = oracle_knapsack(inst)?;
                r.oracle = Some(verdict(&o, s.profit, o.canonical.ids == s.ids));
            }
            Solution::Subset(s)
        }
        InstanceDocument::MultipleChoice(d) => {
            let inst = &d.stages[i].instance;
            let s = solve_multiple_choice(inst)?;
            r.objective = Some(s.profit);
            if oracle {
                let o = oracle_multiple_choice(inst)?;
                r.oracle = Some(verdict(&o, s.profit, o.canonical.chosen == s.chosen));
            }
            Solution::Selection(s)
        }
        InstanceDocument::Assignment(d) => {
            let st = &d.stages[i];
            match (&st.instance, &st.state) {
                (Some(inst), _) => {
                    let p = solve_assignment(inst)?;
                    let value = inst.value(&p);
                    r.objective = Some(value);
                    if oracle {
                        let o = oracle_assignment(inst)?;
                        r.oracle = Some(verdict(&o, value, o.canonical == p));
                    }
                    let positions =
                        p.0.iter().enumerate().map(|(e, &pos)| (Id::from(e as u32 + 1), Id::from(pos as u32))).collect();
                    Solution::Assignment(AssignmentState { positions, capacity: BTreeMap::new() })
                }
                (None, Some(state)) => Solution::Assignment(state.clone()),
                // a goal stage described only by estimates has nothing to solve
                (None, None) => return Ok(r),
            }
        }
        InstanceDocument::SpanningTree(d) => {
            let g = &d.stages[i].graph;
            let t = minimum_spanning_tree(g)?;
            r.objective = Some(t.weight);
            if oracle {
                let o = oracle_spanning_tree(g)?;
                r.oracle = Some(verdict(&o, t.weight, o.canonical.edges == t.edges));
            }
            Solution::Tree(t)
        }
        InstanceDocument::SteinerTree(d) => {
            let g = &d.stages[i].graph;
            let t = steiner_tree(g, &g.vertices)?;
            r.objective = Some(t.weight);
            if oracle {
                let o = oracle_steiner_tree(g, &g.vertices)?;
                r.oracle = Some(verdict(&o, t.weight, o.canonical.edges == t.edges));
            }
            Solution::Tree(t)
        }
        InstanceDocument::Clustering(d) => Solution::Partition(d.stages[i].partition.clone()),
        InstanceDocument::Ranking(d) => Solution::Ranking(d.stages[i].ranking.clone()),
        InstanceDocument::Hmmd(d) => {
            let front = hmmd_synthesize(&d.stages[i].system)?;
            r.composites = front.iter().map(CompositeEntry::from).collect();
            return Ok(r);
        }
    };
    r.summary = Some(solution.to_string());
    r.solution = Some(solution);
    Ok(r)
}

/// The solution in force at stage index `i`: the stored one, else the stage
/// optimum (the first Pareto composite for morphological stages).
pub fn current_solution(doc: &InstanceDocument, i: usize) -> Result<Solution, CliError> {
    let at = |what: &str| format!("stages[{i}].{what}");
    Ok(match doc {
        InstanceDocument::Knapsack(d) => {
            let st = &d.stages[i];
            Solution::Subset(match &st.solution {
                Some(ids) => st.instance.evaluate(ids).map_err(|e| CliError::input(at("solution"), e.to_string()))?,
                None => solve_knapsack(&st.instance)?,
            })
        }
        InstanceDocument::MultipleChoice(d) => {
            let st = &d.stages[i];
            Solution::Selection(match &st.solution {
                Some(c) => st.instance.evaluate(c).map_err(|e| CliError::input(at("solution"), e.to_string()))?,
                None => solve_multiple_choice(&st.instance)?,
            })
        }
        InstanceDocument::Assignment(d) => match &d.stages[i].state {
            Some(s) => Solution::Assignment(s.clone()),
            None => return Err(CliError::input(at("state"), "missing current assignment")),
        },
        InstanceDocument::SpanningTree(d) => {
            let st = &d.stages[i];
            Solution::Tree(match &st.solution {
                Some(t) => t.resolve(&st.graph).map_err(|e| CliError::input(at("solution"), e.to_string()))?,
                None => minimum_spanning_tree(&st.graph)?,
            })
        }
        InstanceDocument::SteinerTree(d) => {
            let st = &d.stages[i];
            Solution::Tree(match &st.solution {
                Some(t) => t.resolve(&st.graph).map_err(|e| CliError::input(at("solution"), e.to_string()))?,
                None => steiner_tree(&st.graph, &st.graph.vertices)?,
            })
        }
        InstanceDocument::Clustering(d) => Solution::Partition(d.stages[i].partition.clone()),
        InstanceDocument::Ranking(d) => Solution::Ranking(d.stages[i].ranking.clone()),
        InstanceDocument::Hmmd(d) => {
            let st = &d.stages[i];
            Solution::Composite(match &st.solution {
                Some(choice) => CompositeSolution { choice: choice.clone(), quality: evaluate_composite(&st.system, choice)? },
                None => hmmd_synthesize(&st.system)?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Infeasible(format!("stage {} has no admissible composite", doc.first_stage() + i)))?,
            })
        }
    })
}

/// Reassignment ops of a goal stage: the explicit ones plus those priced
/// from the estimate table (`h⁻` at the old position plus `h⁺` at the new
/// one, profit `c` at the new one).
pub fn assignment_ops(st: &AssignmentStageDoc, current: &AssignmentState, i: usize) -> Result<Vec<ChangeOp>, CliError> {
    let mut ops = st.ops.clone();
    for (k, m) in st.moves.iter().enumerate() {
        let field = format!("stages[{i}].moves[{k}]");
        let from = current
            .positions
            .get(&m.element)
            .ok_or_else(|| CliError::input(&field, format!("element {} has no current position", m.element)))?;
        let row = st.estimates.get(&m.element);
        let old = row
            .and_then(|r| r.get(from))
            .ok_or_else(|| CliError::input(&field, format!("no estimate for element {} at {from}", m.element)))?;
        let new = row
            .and_then(|r| r.get(&m.to))
            .ok_or_else(|| CliError::input(&field, format!("no estimate for element {} at {}", m.element, m.to)))?;
        ops.push(
            ChangeOp::new(ChangeKind::ReassignPosition, m.element.clone(), old.0 + new.1)
                .moving(from.clone(), m.to.clone())
                .with_profit(new.2),
        );
    }
    Ok(ops)
}

fn tree_target(st: &TreeStageDoc, steiner: bool) -> Result<TreeSolution, Error> {
    match &st.target {
        Some(t) => t.resolve(&st.graph),
        None if steiner => steiner_tree(&st.graph, &st.graph.vertices),
        None => minimum_spanning_tree(&st.graph),
    }
}

/// How an oracle objective maps onto a plan.
#[derive(Clone, Copy)]
enum Measure {
    Gain,
    NegProximity,
}

impl Measure {
    fn of(self, p: &RestructurePlan) -> Money {
        match self {
            Measure::Gain => p.gain,
            Measure::NegProximity => Money::ZERO - p.proximity.scalar(),
        }
    }
}

/// Attach the oracle verdict and turn a bare infeasibility into one with a
/// minimum-budget hint when the change universe is small enough.
fn checked(
    result: restruct_core::Result<Vec<RestructurePlan>>,
    case: Option<RestructureCase>,
    budget: Money,
    oracle: bool,
    measure: Measure,
) -> Result<(Vec<RestructurePlan>, Option<OracleVerdict>), CliError> {
    let plans = match result {
        Ok(p) => p,
        Err(Error::InfeasibleWithBudget { budget, min_budget: None }) => {
            let min_budget = case.as_ref().and_then(|c| oracle_min_budget(c).ok().flatten());
            return Err(Error::InfeasibleWithBudget { budget, min_budget }.into());
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = match (oracle, case) {
        (true, Some(case)) => {
            let o = oracle_restructure(&case, budget)?;
            let best = &plans[0];
            Some(verdict(&o, measure.of(best), o.canonical == best.solution))
        }
        (true, None) => {
            return Err(CliError::input("--oracle", "no restructuring oracle for this kind"));
        }
        _ => None,
    };
    Ok((plans, verdict))
}

/// Restructure the solution of stage `from` toward stage `to`.
pub fn cmd_restructure(
    doc: &InstanceDocument,
    from: Option<usize>,
    to: Option<usize>,
    ov: &Overrides,
) -> Result<RunReport, CliError> {
    let first = doc.first_stage();
    let from_n = from.unwrap_or(first);
    let fi = doc.stage_index(from_n)?;
    let to_n = to.unwrap_or(if doc.stage_count() > 1 { from_n + 1 } else { from_n });
    let ti = doc.stage_index(to_n)?;
    let budget = ov
        .budget
        .or(doc.stage_budget(ti))
        .ok_or_else(|| CliError::input("--budget", format!("no budget given and stages[{ti}] has none")))?;
    let q = ov.candidates.as_ref().and_then(|c| c.first().copied()).unwrap_or(1);
    if q == 0 {
        return Err(CliError::input("--candidates", "candidate counts must be at least 1"));
    }
    let objective = ov.objective.or(doc.options().objective).unwrap_or_default();
    let proximity = doc.options().proximity.unwrap_or_default();
    let oracle = ov.oracle;
    let before = current_solution(doc, fi)?;

    let (plans, verdict) = match (doc, &before) {
        (InstanceDocument::Knapsack(d), Solution::Subset(s)) => {
            let g = &d.stages[ti];
            let res = restructure_knapsack_top(&s.ids, &g.instance, &g.costs, &g.fixed, budget, objective, q);
            let case = RestructureCase::Knapsack { s0: &s.ids, goal: &g.instance, costs: &g.costs, fixed: &g.fixed };
            checked(res, Some(case), budget, oracle, Measure::Gain)?
        }
        (InstanceDocument::MultipleChoice(d), Solution::Selection(s)) => {
            let g = &d.stages[ti];
            let res = restructure_multiple_choice_top(&s.chosen, &g.instance, &g.costs, budget, q);
            let case = RestructureCase::MultipleChoice { current: &s.chosen, goal: &g.instance, costs: &g.costs };
            checked(res, Some(case), budget, oracle, Measure::Gain)?
        }
        (InstanceDocument::Assignment(d), Solution::Assignment(a)) => {
            let ops = assignment_ops(&d.stages[ti], a, ti)?;
            let res = restructure_assignment_top(a, &ops, budget, q);
            let case = RestructureCase::Assignment { current: a, ops: &ops };
            checked(res, Some(case), budget, oracle, Measure::Gain)?
        }
        (InstanceDocument::Clustering(d), Solution::Partition(x1)) => {
            let g = &d.stages[ti];
            let ops = match &g.ops {
                Some(ops) => ops.clone(),
                None => moves_toward(x1, &g.partition, &g.costs)?,
            };
            let res = restructure_clustering(x1, &ops, budget, g.model).map(|p| vec![p]);
            let case = RestructureCase::Clustering { x1, ops: &ops, model: g.model };
            checked(res, Some(case), budget, oracle, Measure::Gain)?
        }
        (InstanceDocument::Ranking(d), Solution::Ranking(r1)) => {
            let g = &d.stages[ti];
            let res = restructure_ranking_top(r1, &g.ranking, &g.costs, budget, q);
            let case = RestructureCase::Ranking { r1, r2: &g.ranking, costs: &g.costs };
            checked(res, Some(case), budget, oracle, Measure::NegProximity)?
        }
        (InstanceDocument::SpanningTree(d), Solution::Tree(t1)) => {
            let g = &d.stages[ti];
            let edge_costs = g.edge_costs.to_costs();
            let target = tree_target(g, false)?;
            let res = restructure_tree_top(&t1.edges, &g.graph, &edge_costs, budget, proximity, Some(&target), q);
            let case = RestructureCase::Tree {
                t1,
                goal: &g.graph,
                edge_costs: &edge_costs,
                steiner_costs: &g.steiner_costs,
                proximity,
                target: &target,
            };
            checked(res, Some(case), budget, oracle, Measure::NegProximity)?
        }
        (InstanceDocument::SteinerTree(d), Solution::Tree(s1)) => {
            let g = &d.stages[ti];
            let edge_costs = g.edge_costs.to_costs();
            let target = tree_target(g, true)?;
            let res = restructure_steiner_top(
                s1,
                &g.graph,
                &edge_costs,
                &g.steiner_costs,
                budget,
                proximity,
                Some(&target),
                q,
            );
            let case = RestructureCase::Tree {
                t1: s1,
                goal: &g.graph,
                edge_costs: &edge_costs,
                steiner_costs: &g.steiner_costs,
                proximity,
                target: &target,
            };
            checked(res, Some(case), budget, oracle, Measure::NegProximity)?
        }
        (InstanceDocument::Hmmd(d), Solution::Composite(c)) => {
            let g = &d.stages[ti];
            let res = restructure_hmmd(&c.choice, &g.system, &hmmd_budget(g.costs.as_ref(), budget));
            checked(res, None, budget, oracle, Measure::Gain)?
        }
        _ => unreachable!("current_solution matches the document kind"),
    };
    let mut out = report(doc, Command::Restructure);
    out.plans = plans.iter().map(|p| PlanReport::new(from_n, to_n, Some(budget), &before, p)).collect();
    out.oracle = verdict;
    Ok(out)
}

fn hmmd_budget(costs: Option<&ChangeCosts>, budget: Money) -> HmmdBudget {
    match costs {
        Some(c) => HmmdBudget::Money { limit: budget, costs: c.clone() },
        None => HmmdBudget::Ops { limit: u32::try_from(budget.tenths().max(0) / 10).unwrap_or(u32::MAX) },
    }
}

/// Goal-stage indices of a trajectory: every stage after the first, or the
/// single stage toward itself.
fn goal_indices(doc: &InstanceDocument) -> Vec<usize> {
    if doc.stage_count() == 1 {
        vec![0]
    } else {
        (1..doc.stage_count()).collect()
    }
}

fn restructurer(doc: &InstanceDocument, objective: KnapsackObjective) -> Result<Box<dyn StageRestructurer>, CliError> {
    let goals = goal_indices(doc);
    let proximity: TreeProximity = doc.options().proximity.unwrap_or_default();
    Ok(match doc {
        InstanceDocument::Knapsack(d) => Box::new(KnapsackStages {
            stages: goals
                .iter()
                .map(|&i| KnapsackStage {
                    instance: d.stages[i].instance.clone(),
                    costs: d.stages[i].costs.clone(),
                    fixed: d.stages[i].fixed.clone(),
                })
                .collect(),
            objective,
        }),
        InstanceDocument::MultipleChoice(d) => Box::new(ChoiceStages {
            stages: goals
                .iter()
                .map(|&i| ChoiceStage { instance: d.stages[i].instance.clone(), costs: d.stages[i].costs.clone() })
                .collect(),
        }),
        InstanceDocument::SpanningTree(d) | InstanceDocument::SteinerTree(d) => {
            let steiner = doc.kind() == crate::document::Kind::SteinerTree;
            let mut stages = Vec::new();
            for &i in &goals {
                let st = &d.stages[i];
                stages.push(TreeStage {
                    graph: st.graph.clone(),
                    edge_costs: st.edge_costs.to_costs(),
                    steiner_costs: st.steiner_costs.clone(),
                    proximity,
                    target: Some(tree_target(st, steiner)?),
                });
            }
            Box::new(TreeStages { stages })
        }
        InstanceDocument::Ranking(d) => Box::new(RankingStages {
            stages: goals
                .iter()
                .map(|&i| RankingStage { goal: d.stages[i].ranking.clone(), costs: d.stages[i].costs.clone() })
                .collect(),
        }),
        InstanceDocument::Hmmd(d) => Box::new(HmmdStages {
            stages: goals
                .iter()
                .map(|&i| HmmdStage { system: d.stages[i].system.clone(), costs: d.stages[i].costs.clone() })
                .collect(),
        }),
        InstanceDocument::Assignment(_) | InstanceDocument::Clustering(_) => {
            return Err(CliError::input(
                "kind",
                format!("trajectories are not supported for {}", doc.kind().name()),
            ));
        }
    })
}

/// Build a multi-stage trajectory by scheme 1, 2 or 3.
pub fn cmd_trajectory(doc: &InstanceDocument, ov: &Overrides) -> Result<RunReport, CliError> {
    let goals = goal_indices(doc);
    let n = goals.len();
    let scheme = ov.scheme.or(doc.options().scheme).unwrap_or(1);
    if !(1..=3).contains(&scheme) {
        return Err(CliError::input("--scheme", format!("scheme {scheme} is not 1, 2 or 3")));
    }
    let objective = ov.objective.or(doc.options().objective).unwrap_or_default();
    let r = restructurer(doc, objective)?;
    let s0 = current_solution(doc, 0)?;
    let numbers: Vec<(usize, usize)> = if doc.stage_count() == 1 {
        vec![(doc.first_stage(), doc.first_stage())]
    } else {
        (0..n).map(|k| (doc.first_stage() + k, doc.first_stage() + k + 1)).collect()
    };

    let explicit = match (doc, scheme) {
        (InstanceDocument::Hmmd(d), 3) => d.options.trajectories.as_ref(),
        _ => None,
    };
    // explicit trajectories are priced, not searched, so budgets are optional
    let budgets: Vec<Option<Money>> = match (&ov.budgets, explicit) {
        (Some(b), _) => {
            if b.len() != n {
                return Err(CliError::input("--budgets", format!("{} budgets for {n} goal stages", b.len())));
            }
            b.iter().copied().map(Some).collect()
        }
        (None, Some(_)) => goals.iter().map(|&i| doc.stage_budget(i)).collect(),
        (None, None) => goals
            .iter()
            .map(|&i| {
                doc.stage_budget(i)
                    .map(Some)
                    .ok_or_else(|| CliError::input(format!("stages[{i}].budget"), "missing; pass --budgets"))
            })
            .collect::<Result<_, _>>()?,
    };
    let q: Vec<usize> = match ov.candidates.as_ref().or(doc.options().candidates.as_ref()) {
        Some(c) if c.len() == n => c.clone(),
        Some(c) => return Err(CliError::input("candidates", format!("{} counts for {n} goal stages", c.len()))),
        None => vec![1; n],
    };

    let mut out = report(doc, Command::Trajectory);
    out.scheme = Some(scheme);
    let searched = || -> Vec<Money> { budgets.iter().map(|b| b.unwrap_or(Money::MAX)).collect() };
    let trajectories: Vec<Trajectory> = match (scheme, explicit) {
        (_, Some(list)) => list
            .iter()
            .map(|choices| explicit_trajectory(doc, r.as_ref(), choices))
            .collect::<Result<_, _>>()?,
        (1, None) => vec![scheme1_series(r.as_ref(), &s0, &searched())?],
        (2, None) => vec![scheme2_compose(r.as_ref(), &s0, &searched(), &q)?.0],
        (_, None) => scheme3_trajectories(r.as_ref(), &s0, &searched(), &q)?,
    };
    for (idx, t) in trajectories.iter().enumerate() {
        let agg = aggregate(t)?;
        let mut steps = Vec::new();
        let mut prev = &t.start;
        for (k, p) in t.steps.iter().enumerate() {
            let (a, b) = numbers[k];
            steps.push(PlanReport::new(a, b, budgets[k], prev, p));
            prev = &p.solution;
        }
        out.trajectories.push(TrajectoryReport {
            index: idx,
            start: t.start.to_string(),
            steps,
            scalar: agg.scalar(),
            aggregate: agg,
        });
    }
    if scheme == 3 {
        let keep = scheme3_select(&trajectories)?;
        let front: BTreeSet<usize> = keep
            .iter()
            .filter_map(|k| trajectories.iter().position(|t| t == k))
            .collect();
        out.front = Some(front.into_iter().collect());
    }
    Ok(out)
}

/// A trajectory through given composites (stage 0 first); each step is the
/// unique plan between consecutive composites.
fn explicit_trajectory(
    doc: &InstanceDocument,
    r: &dyn StageRestructurer,
    choices: &[Vec<Id>],
) -> Result<Trajectory, CliError> {
    let InstanceDocument::Hmmd(d) = doc else { unreachable!("explicit trajectories are hmmd only") };
    let composite = |i: usize| -> Result<Solution, CliError> {
        let quality = evaluate_composite(&d.stages[i].system, &choices[i])?;
        Ok(Solution::Composite(CompositeSolution { choice: choices[i].clone(), quality }))
    };
    let start = composite(0)?;
    let mut t = Trajectory { start, steps: Vec::new() };
    for i in 1..choices.len() {
        let to = composite(i)?;
        let plan = r
            .transition(i, t.last(), &to)?
            .ok_or_else(|| Error::Infeasible(format!("stage {}: no plan reaches the listed composite", doc.first_stage() + i)))?;
        t.steps.push(plan);
    }
    Ok(t)
}
