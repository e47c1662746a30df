//! Budgeted transformation of an existing solution toward a goal-stage optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::solvers::{CompositeSolution, EdgeKey, GroupSelection, SubsetSolution, TreeSolution};

mod assignment;
mod clustering;
mod hmmd;
mod knapsack;
mod multiple_choice;
mod ranking;
pub(crate) mod search;
mod tree;

pub use assignment::{restructure_assignment, restructure_assignment_top, AssignmentState};
pub use clustering::{apply_moves, moves_toward, restructure_clustering, ClusteringModel};
pub use hmmd::{hmmd_plan, restructure_hmmd, HmmdBudget};
pub use knapsack::{knapsack_transition, restructure_knapsack, restructure_knapsack_top, KnapsackObjective};
pub use multiple_choice::{
    multiple_choice_transition, restructure_multiple_choice, restructure_multiple_choice_top,
};
pub use ranking::{
    layer_distance, ranking_budget_admits, ranking_transition, restructure_ranking, restructure_ranking_top,
    MoveCosts,
};
pub use tree::{
    restructure_steiner, restructure_steiner_top, restructure_tree, restructure_tree_top, tree_transition,
    TreeProximity,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChangeKind {
    DeleteElement,
    AddElement,
    ReplaceInGroup,
    MoveBetweenClusters,
    ReassignPosition,
    AddSteinerVertex,
    DeleteSteinerVertex,
}

/// What a change operation acts on: a plain element or a graph edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subject {
    Element(Id),
    Edge(EdgeKey),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Element(id) => id.fmt(f),
            Subject::Edge(e) => e.fmt(f),
        }
    }
}

impl From<Id> for Subject {
    fn from(id: Id) -> Subject {
        Subject::Element(id)
    }
}

impl From<EdgeKey> for Subject {
    fn from(e: EdgeKey) -> Subject {
        Subject::Edge(e)
    }
}

/// One atomic edit of a solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeOp {
    pub kind: ChangeKind,
    pub subject: Subject,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<Id>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<Id>,
    pub cost: Money,
    #[serde(default)]
    pub profit: Money,
}

impl ChangeOp {
    pub fn new(kind: ChangeKind, subject: impl Into<Subject>, cost: Money) -> ChangeOp {
        ChangeOp { kind, subject: subject.into(), from: None, to: None, cost, profit: Money::ZERO }
    }

    pub fn moving(mut self, from: impl Into<Id>, to: impl Into<Id>) -> ChangeOp {
        self.from = Some(from.into());
        self.to = Some(to.into());
        self
    }

    pub fn with_profit(mut self, profit: Money) -> ChangeOp {
        self.profit = profit;
        self
    }
}

impl fmt::Display for ChangeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match self.kind {
            ChangeKind::DeleteElement => "delete",
            ChangeKind::AddElement => "add",
            ChangeKind::ReplaceInGroup => "replace",
            ChangeKind::MoveBetweenClusters => "move",
            ChangeKind::ReassignPosition => "reassign",
            ChangeKind::AddSteinerVertex => "add-steiner",
            ChangeKind::DeleteSteinerVertex => "delete-steiner",
        };
        write!(f, "{verb} {}", self.subject)?;
        match (&self.from, &self.to) {
            (Some(a), Some(b)) => write!(f, " {a}->{b}")?,
            (Some(a), None) => write!(f, " from {a}")?,
            (None, Some(b)) => write!(f, " to {b}")?,
            (None, None) => {}
        }
        write!(f, " [cost {}]", self.cost)
    }
}

/// Elements leaving and entering a solution.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolutionDiff<T: Ord> {
    pub deleted: BTreeSet<T>,
    pub added: BTreeSet<T>,
}

impl<T: Ord + Clone> SolutionDiff<T> {
    pub fn between(before: &BTreeSet<T>, after: &BTreeSet<T>) -> SolutionDiff<T> {
        SolutionDiff {
            deleted: before.difference(after).cloned().collect(),
            added: after.difference(before).cloned().collect(),
        }
    }

    pub fn apply(&self, before: &BTreeSet<T>) -> BTreeSet<T> {
        before
            .difference(&self.deleted)
            .chain(self.added.iter())
            .cloned()
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.deleted.is_empty() && self.added.is_empty()
    }
}

pub fn diff_subsets(before: &SubsetSolution, after: &SubsetSolution) -> SolutionDiff<Id> {
    SolutionDiff::between(&before.ids, &after.ids)
}

/// Split of two consecutive element universes into removed, added and fixed parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSetDelta {
    pub removed: BTreeSet<Id>,
    pub added: BTreeSet<Id>,
    pub fixed: BTreeSet<Id>,
}

pub fn element_set_delta(a0: &BTreeSet<Id>, a1: &BTreeSet<Id>) -> ElementSetDelta {
    ElementSetDelta {
        removed: a0.difference(a1).cloned().collect(),
        added: a1.difference(a0).cloned().collect(),
        fixed: a0.intersection(a1).cloned().collect(),
    }
}

/// Deletion and addition costs per element. Elements without a listed cost
/// fall back to the default; with no default the change is unavailable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeCosts<K: Ord = Id> {
    #[serde(default = "BTreeMap::new")]
    pub delete: BTreeMap<K, Money>,
    #[serde(default = "BTreeMap::new")]
    pub add: BTreeMap<K, Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_delete: Option<Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_add: Option<Money>,
}

impl<K: Ord> Default for ChangeCosts<K> {
    fn default() -> Self {
        ChangeCosts { delete: BTreeMap::new(), add: BTreeMap::new(), default_delete: None, default_add: None }
    }
}

impl<K: Ord> ChangeCosts<K> {
    pub fn uniform(delete: Money, add: Money) -> ChangeCosts<K> {
        ChangeCosts {
            delete: BTreeMap::new(),
            add: BTreeMap::new(),
            default_delete: Some(delete),
            default_add: Some(add),
        }
    }

    pub fn delete_cost(&self, k: &K) -> Option<Money> {
        self.delete.get(k).copied().or(self.default_delete)
    }

    pub fn add_cost(&self, k: &K) -> Option<Money> {
        self.add.get(k).copied().or(self.default_add)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let negative = self
            .delete
            .values()
            .chain(self.add.values())
            .chain(self.default_delete.iter())
            .chain(self.default_add.iter())
            .any(|m| m.is_negative());
        if negative {
            return Err(Error::InvalidInstance("change costs must be non-negative".into()));
        }
        Ok(())
    }

    /// Sum of every listed cost; enough budget to afford any single plan
    /// that touches only listed elements.
    pub fn total(&self) -> Money {
        self.delete.values().chain(self.add.values()).sum()
    }
}

/// Distance between a restructured solution and the goal-stage reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "kebab-case")]
pub enum Proximity {
    /// Objective-value gap.
    Value { value: Money },
    /// Improvement steps by elements and by compatibility.
    Steps { elements: u32, compatibility: u32 },
    /// Number of differing structural units (edges, layer steps).
    Count { count: u32 },
}

impl Proximity {
    pub fn components(&self) -> Vec<Money> {
        match *self {
            Proximity::Value { value } => vec![value],
            Proximity::Steps { elements, compatibility } => {
                vec![Money::from_units(elements.into()), Money::from_units(compatibility.into())]
            }
            Proximity::Count { count } => vec![Money::from_units(count.into())],
        }
    }

    pub fn scalar(&self) -> Money {
        self.components().into_iter().sum()
    }
}

impl fmt::Display for Proximity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proximity::Value { value } => value.fmt(f),
            Proximity::Steps { elements, compatibility } => write!(f, "({elements},{compatibility})"),
            Proximity::Count { count } => count.fmt(f),
        }
    }
}

/// Clusters over an element universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub clusters: BTreeMap<Id, BTreeSet<Id>>,
}

impl Partition {
    pub fn new(clusters: impl IntoIterator<Item = (Id, BTreeSet<Id>)>) -> Result<Partition> {
        let p = Partition { clusters: clusters.into_iter().collect() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (c, members) in &self.clusters {
            for e in members {
                if !seen.insert(e) {
                    return Err(Error::InvalidInstance(format!(
                        "element {e} appears twice (again in cluster {c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cluster_of(&self, e: &Id) -> Option<&Id> {
        self.clusters.iter().find(|(_, m)| m.contains(e)).map(|(c, _)| c)
    }

    pub fn universe(&self) -> BTreeSet<Id> {
        self.clusters.values().flatten().cloned().collect()
    }

    pub fn membership(&self) -> BTreeMap<Id, Id> {
        self.clusters
            .iter()
            .flat_map(|(c, m)| m.iter().map(move |e| (e.clone(), c.clone())))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clusters
            .iter()
            .map(|(c, m)| format!("{c}={{{}}}", join(m)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Linearly ordered layers, best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayeredRanking {
    pub layers: Vec<BTreeSet<Id>>,
}

impl LayeredRanking {
    pub fn new(layers: Vec<BTreeSet<Id>>) -> Result<LayeredRanking> {
        let r = LayeredRanking { layers };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for layer in &self.layers {
            for e in layer {
                if !seen.insert(e) {
                    return Err(Error::InvalidInstance(format!("element {e} ranked twice")));
                }
            }
        }
        Ok(())
    }

    /// 1-based layer of each element.
    pub fn positions(&self) -> BTreeMap<Id, usize> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().map(move |e| (e.clone(), i + 1)))
            .collect()
    }

    pub fn universe(&self) -> BTreeSet<Id> {
        self.layers.iter().flatten().cloned().collect()
    }
}

impl fmt::Display for LayeredRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.layers.iter().map(|l| format!("{{{}}}", join(l))).collect();
        f.write_str(&parts.join(" -> "))
    }
}

pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// The restructured solution in problem-specific form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Solution {
    Subset(SubsetSolution),
    Selection(GroupSelection),
    Assignment(AssignmentState),
    Tree(TreeSolution),
    Partition(Partition),
    #[serde(with = "layers_field")]
    Ranking(LayeredRanking),
    Composite(CompositeSolution),
}

// A tagged variant cannot hold a bare sequence, so rankings nest under `layers`.
mod layers_field {
    use super::LayeredRanking;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Layers {
        layers: LayeredRanking,
    }

    pub fn serialize<S: Serializer>(r: &LayeredRanking, s: S) -> Result<S::Ok, S::Error> {
        Layers { layers: r.clone() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LayeredRanking, D::Error> {
        Ok(Layers::deserialize(d)?.layers)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solution::Subset(s) => write!(f, "{{{}}} profit {} weight {}", join(&s.ids), s.profit, s.weight),
            Solution::Selection(s) => write!(
                f,
                "{} profit {} weight {}",
                join(s.chosen.iter().map(|(g, i)| format!("{g}:{i}"))),
                s.profit,
                s.weight
            ),
            Solution::Assignment(a) => {
                f.write_str(&join(a.positions.iter().map(|(e, p)| format!("{e}@{p}"))))
            }
            Solution::Tree(t) => {
                write!(f, "edges {{{}}}", join(&t.edges))?;
                if !t.steiner.is_empty() {
                    write!(f, " steiner {{{}}}", join(&t.steiner))?;
                }
                write!(f, " weight {}", t.weight)
            }
            Solution::Partition(p) => p.fmt(f),
            Solution::Ranking(r) => r.fmt(f),
            Solution::Composite(c) => c.fmt(f),
        }
    }
}

/// Selected operations, the solution they produce, their total cost `H`
/// and the remaining proximity to the goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestructurePlan {
    pub ops: Vec<ChangeOp>,
    pub solution: Solution,
    pub cost: Money,
    /// Goal-stage objective gained over leaving the solution as is.
    pub gain: Money,
    pub proximity: Proximity,
}

impl RestructurePlan {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

pub(crate) fn check_budget(budget: Money) -> Result<()> {
    if budget.is_negative() {
        return Err(Error::InvalidInstance(format!("budget {budget} is negative")));
    }
    Ok(())
}
