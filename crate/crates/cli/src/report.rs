//! Run reports: one serializable structure per command, rendered as pretty
//! JSON or plain text. Every collection is ordered, so identical inputs give
//! identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use restruct_core::multistage::Aggregate;
use restruct_core::restructure::{ChangeOp, Proximity, RestructurePlan, Solution};
use restruct_core::solvers::CompositeSolution;
use restruct_core::{Id, Money};
use serde::Serialize;

use crate::document::Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Restructure,
    Trajectory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub plans: Vec<PlanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<u8>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trajectories: Vec<TrajectoryReport>,
    /// Indices into `trajectories` of the non-dominated ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
}

impl RunReport {
    pub fn new(command: Command, kind: Kind, name: Option<&str>) -> RunReport {
        RunReport {
            command,
            kind,
            name: name.map(str::to_string),
            stages: Vec::new(),
            plans: Vec::new(),
            scheme: None,
            trajectories: Vec::new(),
            front: None,
            oracle: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} {}", command_name(self.command), self.kind.name());
        if let Some(n) = &self.name {
            let _ = write!(out, " ({n})");
        }
        out.push('\n');
        for s in &self.stages {
            let _ = write!(out, "stage {}", s.stage);
            if let Some(o) = s.objective {
                let _ = write!(out, ": objective {o}");
            }
            out.push('\n');
            if let Some(sum) = &s.summary {
                let _ = writeln!(out, "  {sum}");
            }
            for c in &s.composites {
                let _ = writeln!(out, "  {} {}", c.label, c.quality);
            }
        }
        for p in &self.plans {
            text_plan(&mut out, p, "");
        }
        for t in &self.trajectories {
            let mark = if self.front.as_ref().is_some_and(|f| f.contains(&t.index)) { " *" } else { "" };
            let _ = writeln!(
                out,
                "trajectory {}{mark}: H {} rho ({}) total {}",
                t.index,
                t.aggregate.cost,
                join(&t.aggregate.proximity),
                t.scalar
            );
            let _ = writeln!(out, "  start {}", t.start);
            for p in &t.steps {
                text_plan(&mut out, p, "  ");
            }
        }
        if let Some(f) = &self.front {
            let _ = writeln!(out, "front: {}", join(f));
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "oracle: {} (oracle {}, solver {}, {} optima over {} candidates)",
                o.verdict, o.objective, o.solver, o.optima, o.enumerated
            );
        }
        out
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Solve => "solve",
        Command::Restructure => "restructure",
        Command::Trajectory => "trajectory",
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn text_plan(out: &mut String, p: &PlanReport, indent: &str) {
    let budget = p.budget.map(|b| format!(" budget {b}")).unwrap_or_default();
    let _ = writeln!(
        out,
        "{indent}plan {}->{}{budget}: H {} gain {} rho {}",
        p.from, p.to, p.cost, p.gain, p.proximity
    );
    for op in &p.ops {
        let _ = writeln!(out, "{indent}  {op}");
    }
    let _ = writeln!(out, "{indent}  result {}", p.summary);
    let _ = writeln!(out, "{indent}  deleted {{{}}} added {{{}}}", join_set(&p.diff.deleted), join_set(&p.diff.added));
    if let Some(d) = &p.steiner_diff {
        let _ = writeln!(out, "{indent}  steiner deleted {{{}}} added {{{}}}", join_set(&d.deleted), join_set(&d.added));
    }
}

fn join_set(s: &BTreeSet<Id>) -> String {
    s.iter().map(Id::as_str).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Money>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Solution>,
    /// Pareto-efficient composites of a morphological stage.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub composites: Vec<CompositeEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositeEntry {
    pub label: String,
    pub quality: String,
    pub choice: Vec<Id>,
}

impl From<&CompositeSolution> for CompositeEntry {
    fn from(c: &CompositeSolution) -> CompositeEntry {
        CompositeEntry {
            label: restruct_core::solvers::hmmd::join_choice(&c.choice),
            quality: c.quality.to_string(),
            choice: c.choice.clone(),
        }
    }
}

/// Elements that left (`S*-`) and entered (`S*+`) the solution.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Diff {
    pub deleted: BTreeSet<Id>,
    pub added: BTreeSet<Id>,
}

impl Diff {
    pub fn between(before: &BTreeSet<Id>, after: &BTreeSet<Id>) -> Diff {
        Diff { deleted: before.difference(after).cloned().collect(), added: after.difference(before).cloned().collect() }
    }
}

/// Element view of a solution used for diffs: ids, chosen items, edges,
/// or `element@place` for placements.
pub fn elements(s: &Solution) -> BTreeSet<Id> {
    match s {
        Solution::Subset(x) => x.ids.clone(),
        Solution::Selection(x) => x.items(),
        Solution::Assignment(a) => a.positions.iter().map(|(e, p)| Id::new(format!("{e}@{p}"))).collect(),
        Solution::Tree(t) => t.edges.iter().map(|e| Id::new(e.to_string())).collect(),
        Solution::Partition(p) => p.membership().iter().map(|(e, c)| Id::new(format!("{e}@{c}"))).collect(),
        Solution::Ranking(r) => r.positions().iter().map(|(e, l)| Id::new(format!("{e}@L{l}"))).collect(),
        Solution::Composite(c) => c.choice.iter().cloned().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanReport {
    pub from: usize,
    pub to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
    pub ops: Vec<ChangeOp>,
    pub summary: String,
    pub solution: Solution,
    /// Total change cost `H`.
    pub cost: Money,
    pub gain: Money,
    pub proximity: Proximity,
    pub diff: Diff,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steiner_diff: Option<Diff>,
}

impl PlanReport {
    pub fn new(from: usize, to: usize, budget: Option<Money>, before: &Solution, plan: &RestructurePlan) -> PlanReport {
        let steiner_diff = match (before, &plan.solution) {
            (Solution::Tree(a), Solution::Tree(b)) if !(a.steiner.is_empty() && b.steiner.is_empty()) => {
                Some(Diff::between(&a.steiner, &b.steiner))
            }
            _ => None,
        };
        PlanReport {
            from,
            to,
            budget,
            ops: plan.ops.clone(),
            summary: plan.solution.to_string(),
            solution: plan.solution.clone(),
            cost: plan.cost,
            gain: plan.gain,
            proximity: plan.proximity,
            diff: Diff::between(&elements(before), &elements(&plan.solution)),
            steiner_diff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrajectoryReport {
    pub index: usize,
    pub start: String,
    pub steps: Vec<PlanReport>,
    pub aggregate: Aggregate,
    /// `H̃ + Σρ̃`.
    pub scalar: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        })
    }
}

/// Brute-force cross-check of a solver result. `objective` and `solver` are
/// on the oracle's scale: profit or gain for value problems, weight for
/// trees, negated proximity for restructured trees and rankings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub verdict: Verdict,
    pub objective: Money,
    pub solver: Money,
    pub optima: u64,
    pub enumerated: u64,
    /// Whether the solver returned the oracle's canonical optimum.
    pub canonical: bool,
}
