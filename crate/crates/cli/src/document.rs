//! Instance files: one JSON document with a `kind` discriminator, a stage
//! array and run options.

use std::collections::{BTreeMap, BTreeSet};

use restruct_core::restructure::{
    AssignmentState, ChangeCosts, ChangeKind, ChangeOp, ClusteringModel, KnapsackObjective, LayeredRanking, MoveCosts,
    Partition, TreeProximity,
};
use restruct_core::solvers::{
    AssignmentInstance, EdgeKey, KnapsackInstance, MorphSystem, MultipleChoiceInstance, TreeSolution, WeightedGraph,
};
use restruct_core::{Id, Money};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Knapsack,
    MultipleChoice,
    Assignment,
    SpanningTree,
    SteinerTree,
    Clustering,
    Ranking,
    Hmmd,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Knapsack,
        Kind::MultipleChoice,
        Kind::Assignment,
        Kind::SpanningTree,
        Kind::SteinerTree,
        Kind::Clustering,
        Kind::Ranking,
        Kind::Hmmd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Knapsack => "knapsack",
            Kind::MultipleChoice => "multiple-choice",
            Kind::Assignment => "assignment",
            Kind::SpanningTree => "spanning-tree",
            Kind::SteinerTree => "steiner-tree",
            Kind::Clustering => "clustering",
            Kind::Ranking => "ranking",
            Kind::Hmmd => "hmmd",
        }
    }
}

/// Tie-break among equally good plans. Only the canonical rule exists: more
/// objective, then fewer changes, then earlier touched elements, then lower
/// cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<KnapsackObjective>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proximity: Option<TreeProximity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<TieBreak>,
    /// Candidate counts `q_i`, one per goal stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<u8>,
    /// Explicit composite trajectories (stage 0 first) for HMMD scheme 3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<Vec<Vec<Id>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Doc<S> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Number of the first stage; later stages count up from it.
    #[serde(default, skip_serializing_if = "is_default")]
    pub first_stage: usize,
    pub stages: Vec<S>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

fn is_empty_costs<K: Ord>(c: &ChangeCosts<K>) -> bool {
    c.delete.is_empty() && c.add.is_empty() && c.default_delete.is_none() && c.default_add.is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnapsackStageDoc {
    pub instance: KnapsackInstance,
    #[serde(default, skip_serializing_if = "is_empty_costs")]
    pub costs: ChangeCosts,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub fixed: BTreeSet<Id>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
    /// Solution in force at this stage; the stage optimum when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<BTreeSet<Id>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceStageDoc {
    pub instance: MultipleChoiceInstance,
    #[serde(default, skip_serializing_if = "is_empty_costs")]
    pub costs: ChangeCosts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
    /// Group id to chosen item id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<BTreeMap<Id, Id>>,
}

/// `(h⁻, h⁺, c)` of one element at one position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate(pub Money, pub Money, pub Money);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Move {
    pub element: Id,
    pub to: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentStageDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<AssignmentInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<AssignmentState>,
    /// Element id to position id to `(h⁻, h⁺, c)`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub estimates: BTreeMap<Id, BTreeMap<Id, Estimate>>,
    /// Candidate reassignments priced from `estimates`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<Move>,
    /// Candidate reassignments with explicit cost and profit.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<ChangeOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCost {
    pub edge: EdgeKey,
    pub cost: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCostsDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delete: Vec<EdgeCost>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub add: Vec<EdgeCost>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_delete: Option<Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_add: Option<Money>,
}

impl EdgeCostsDoc {
    pub fn to_costs(&self) -> ChangeCosts<EdgeKey> {
        ChangeCosts {
            delete: self.delete.iter().map(|e| (e.edge.clone(), e.cost)).collect(),
            add: self.add.iter().map(|e| (e.edge.clone(), e.cost)).collect(),
            default_delete: self.default_delete,
            default_add: self.default_add,
        }
    }
}

/// A tree by its edges; the weight is recomputed from the stage graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub edges: BTreeSet<EdgeKey>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub steiner: BTreeSet<Id>,
}

impl TreeDoc {
    pub fn resolve(&self, g: &WeightedGraph) -> restruct_core::Result<TreeSolution> {
        Ok(TreeSolution { edges: self.edges.clone(), steiner: self.steiner.clone(), weight: g.tree_weight(&self.edges)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeStageDoc {
    pub graph: WeightedGraph,
    #[serde(default, skip_serializing_if = "is_default")]
    pub edge_costs: EdgeCostsDoc,
    #[serde(default, skip_serializing_if = "is_empty_costs")]
    pub steiner_costs: ChangeCosts,
    /// Reference tree for proximity; the stage optimum when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TreeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<TreeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusteringStageDoc {
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "is_empty_costs")]
    pub costs: ChangeCosts,
    /// Candidate moves into this stage; derived from the partitions when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<Vec<ChangeOp>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub model: ClusteringModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingStageDoc {
    pub ranking: LayeredRanking,
    pub costs: MoveCosts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmmdStageDoc {
    pub system: MorphSystem,
    /// Per-DA replacement costs; each replacement costs one unit when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<ChangeCosts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<Id>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceDocument {
    Knapsack(Doc<KnapsackStageDoc>),
    MultipleChoice(Doc<ChoiceStageDoc>),
    Assignment(Doc<AssignmentStageDoc>),
    SpanningTree(Doc<TreeStageDoc>),
    SteinerTree(Doc<TreeStageDoc>),
    Clustering(Doc<ClusteringStageDoc>),
    Ranking(Doc<RankingStageDoc>),
    Hmmd(Doc<HmmdStageDoc>),
}

macro_rules! each_doc {
    ($self:expr, $d:ident => $body:expr) => {
        match $self {
            InstanceDocument::Knapsack($d) => $body,
            InstanceDocument::MultipleChoice($d) => $body,
            InstanceDocument::Assignment($d) => $body,
            InstanceDocument::SpanningTree($d) => $body,
            InstanceDocument::SteinerTree($d) => $body,
            InstanceDocument::Clustering($d) => $body,
            InstanceDocument::Ranking($d) => $body,
            InstanceDocument::Hmmd($d) => $body,
        }
    };
}

impl InstanceDocument {
    pub fn kind(&self) -> Kind {
        match self {
            InstanceDocument::Knapsack(_) => Kind::Knapsack,
            InstanceDocument::MultipleChoice(_) => Kind::MultipleChoice,
            InstanceDocument::Assignment(_) => Kind::Assignment,
            InstanceDocument::SpanningTree(_) => Kind::SpanningTree,
            InstanceDocument::SteinerTree(_) => Kind::SteinerTree,
            InstanceDocument::Clustering(_) => Kind::Clustering,
            InstanceDocument::Ranking(_) => Kind::Ranking,
            InstanceDocument::Hmmd(_) => Kind::Hmmd,
        }
    }

    pub fn stage_count(&self) -> usize {
        each_doc!(self, d => d.stages.len())
    }

    pub fn first_stage(&self) -> usize {
        each_doc!(self, d => d.first_stage)
    }

    /// Array index of stage number `n`.
    pub fn stage_index(&self, n: usize) -> Result<usize, CliError> {
        let first = self.first_stage();
        n.checked_sub(first)
            .filter(|&i| i < self.stage_count())
            .ok_or_else(|| {
                CliError::input(
                    "stage",
                    format!("stage {n} is not in {first}..={}", first + self.stage_count() - 1),
                )
            })
    }

    pub fn options(&self) -> &Options {
        each_doc!(self, d => &d.options)
    }

    pub fn name(&self) -> Option<&str> {
        each_doc!(self, d => d.name.as_deref())
    }

    /// Budget stored with stage `i`, if any.
    pub fn stage_budget(&self, i: usize) -> Option<Money> {
        match self {
            InstanceDocument::Knapsack(d) => d.stages.get(i)?.budget,
            InstanceDocument::MultipleChoice(d) => d.stages.get(i)?.budget,
            InstanceDocument::Assignment(d) => d.stages.get(i)?.budget,
            InstanceDocument::SpanningTree(d) | InstanceDocument::SteinerTree(d) => d.stages.get(i)?.budget,
            InstanceDocument::Clustering(d) => d.stages.get(i)?.budget,
            InstanceDocument::Ranking(d) => d.stages.get(i)?.budget,
            InstanceDocument::Hmmd(d) => d.stages.get(i)?.budget,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Structural checks that serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.stage_count() == 0 {
            return Err(CliError::input("stages", "at least one stage is required"));
        }
        let opts = self.options();
        if let Some(s) = opts.scheme {
            if !(1..=3).contains(&s) {
                return Err(CliError::input("options.scheme", format!("scheme {s} is not 1, 2 or 3")));
            }
        }
        if let Some(q) = &opts.candidates {
            if q.contains(&0) {
                return Err(CliError::input("options.candidates", "candidate counts must be at least 1"));
            }
        }
        if opts.trajectories.is_some() && self.kind() != Kind::Hmmd {
            return Err(CliError::input("options.trajectories", "explicit trajectories are only read for hmmd"));
        }
        match self {
            InstanceDocument::Knapsack(d) => {
                for (i, s) in d.stages.iter().enumerate() {
                    let known: BTreeSet<&Id> = s.instance.items.iter().map(|it| &it.id).collect();
                    if let Some(bad) = s.fixed.iter().find(|id| !known.contains(id)) {
                        return Err(CliError::input(format!("stages[{i}].fixed"), format!("unknown item {bad}")));
                    }
                    if let Some(bad) = s.solution.iter().flatten().find(|id| !known.contains(id)) {
                        return Err(CliError::input(format!("stages[{i}].solution"), format!("unknown item {bad}")));
                    }
                }
            }
            InstanceDocument::MultipleChoice(d) => {
                for (i, s) in d.stages.iter().enumerate() {
                    for (g, it) in s.solution.iter().flatten() {
                        let ok = s.instance.group(g).is_some_and(|grp| grp.items.iter().any(|x| &x.id == it));
                        if !ok {
                            return Err(CliError::input(
                                format!("stages[{i}].solution"),
                                format!("item {it} is not in group {g}"),
                            ));
                        }
                    }
                }
            }
            InstanceDocument::Assignment(d) => {
                for (i, s) in d.stages.iter().enumerate() {
                    for m in &s.moves {
                        if !s.estimates.get(&m.element).is_some_and(|e| e.contains_key(&m.to)) {
                            return Err(CliError::input(
                                format!("stages[{i}].moves"),
                                format!("no estimate for element {} at position {}", m.element, m.to),
                            ));
                        }
                    }
                    for op in &s.ops {
                        if op.kind != ChangeKind::ReassignPosition {
                            return Err(CliError::input(format!("stages[{i}].ops"), "only reassign-position ops apply"));
                        }
                    }
                }
            }
            InstanceDocument::SpanningTree(d) | InstanceDocument::SteinerTree(d) => {
                for (i, s) in d.stages.iter().enumerate() {
                    let vertices = s.graph.all_vertices();
                    for e in s.graph.edges.iter() {
                        if !vertices.contains(&e.u) || !vertices.contains(&e.v) {
                            return Err(CliError::input(format!("stages[{i}].graph.edges"), format!("edge ({},{}) leaves the vertex set", e.u, e.v)));
                        }
                    }
                    let keys = s.graph.weights();
                    for t in s.solution.iter().chain(s.target.iter()) {
                        if let Some(bad) = t.edges.iter().find(|e| !keys.contains_key(e)) {
                            return Err(CliError::input(format!("stages[{i}]"), format!("tree edge {bad} is not in the graph")));
                        }
                    }
                }
            }
            InstanceDocument::Hmmd(d) => {
                for (i, s) in d.stages.iter().enumerate() {
                    if let Some(sol) = &s.solution {
                        restruct_core::solvers::evaluate_composite(&s.system, sol)
                            .map_err(|e| CliError::input(format!("stages[{i}].solution"), e.to_string()))?;
                    }
                }
                if let Some(ts) = &opts.trajectories {
                    for (t, traj) in ts.iter().enumerate() {
                        if traj.len() != d.stages.len() {
                            return Err(CliError::input(
                                format!("options.trajectories[{t}]"),
                                format!("{} composites for {} stages", traj.len(), d.stages.len()),
                            ));
                        }
                        for (i, choice) in traj.iter().enumerate() {
                            restruct_core::solvers::evaluate_composite(&d.stages[i].system, choice).map_err(|e| {
                                CliError::input(format!("options.trajectories[{t}][{i}]"), e.to_string())
                            })?;
                        }
                    }
                }
            }
            InstanceDocument::Clustering(_) | InstanceDocument::Ranking(_) => {}
        }
        Ok(())
    }
}

fn typed<S: DeserializeOwned>(value: serde_json::Value) -> Result<Doc<S>, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::input(if path == "." { "document".to_string() } else { path }, e.into_inner().to_string())
    })
}

/// Parse and validate an instance document, naming the offending field on
/// failure.
pub fn parse_document(text: &str) -> Result<InstanceDocument, CliError> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::input("document", format!("invalid JSON: {e}")))?;
    let obj = value.as_object_mut().ok_or_else(|| CliError::input("document", "expected a JSON object"))?;
    let kind = match obj.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        Some(_) => return Err(CliError::input("kind", "expected a string")),
        None => return Err(CliError::input("kind", "missing field")),
    };
    let doc = match kind.as_str() {
        "knapsack" => InstanceDocument::Knapsack(typed(value)?),
        "multiple-choice" => InstanceDocument::MultipleChoice(typed(value)?),
        "assignment" => InstanceDocument::Assignment(typed(value)?),
        "spanning-tree" => InstanceDocument::SpanningTree(typed(value)?),
        "steiner-tree" => InstanceDocument::SteinerTree(typed(value)?),
        "clustering" => InstanceDocument::Clustering(typed(value)?),
        "ranking" => InstanceDocument::Ranking(typed(value)?),
        "hmmd" => InstanceDocument::Hmmd(typed(value)?),
        other => {
            let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
            return Err(CliError::input("kind", format!("unknown kind {other:?}; expected one of {}", names.join(", "))));
        }
    };
    doc.validate()?;
    Ok(doc)
}
