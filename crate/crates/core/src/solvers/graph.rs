use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;

/// Undirected edge with normalized endpoint order (`0 <= 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub Id, pub Id);

impl EdgeKey {
    pub fn new(a: impl Into<Id>, b: impl Into<Id>) -> EdgeKey {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn touches(&self, v: &Id) -> bool {
        &self.0 == v || &self.1 == v
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl Serialize for EdgeKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.0, &self.1).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EdgeKey {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (a, b) = <(Id, Id)>::deserialize(deserializer)?;
        Ok(EdgeKey::new(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: Id,
    pub v: Id,
    pub weight: Money,
}

impl Edge {
    pub fn new(u: impl Into<Id>, v: impl Into<Id>, weight: Money) -> Edge {
        Edge {
            u: u.into(),
            v: v.into(),
            weight,
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.u.clone(), self.v.clone())
    }
}

/// Graph `G = (A, E)` with an optional pool `Z` of Steiner candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub vertices: BTreeSet<Id>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub steiner: BTreeSet<Id>,
    pub edges: Vec<Edge>,
}

/// A tree given by its edges; `steiner` lists the non-terminal vertices it
/// uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSolution {
    pub edges: BTreeSet<EdgeKey>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub steiner: BTreeSet<Id>,
    pub weight: Money,
}

impl WeightedGraph {
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.vertices.intersection(&self.steiner).next() {
            return Err(Error::InvalidInstance(format!(
                "vertex {v} is both required and a Steiner candidate"
            )));
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("self loop at {}", e.u)));
            }
            for end in [&e.u, &e.v] {
                if !self.vertices.contains(end) && !self.steiner.contains(end) {
                    return Err(Error::InvalidInstance(format!("edge endpoint {end} is not a vertex")));
                }
            }
            if !seen.insert(e.key()) {
                return Err(Error::InvalidInstance(format!("duplicate edge {}", e.key())));
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> BTreeMap<EdgeKey, Money> {
        self.edges.iter().map(|e| (e.key(), e.weight)).collect()
    }

    pub fn all_vertices(&self) -> BTreeSet<Id> {
        self.vertices.union(&self.steiner).cloned().collect()
    }

    /// Edges with both endpoints in `keep`, sorted by `(weight, key)`.
    pub(crate) fn induced_sorted(&self, keep: &BTreeSet<Id>) -> Vec<(EdgeKey, Money)> {
        let mut edges: Vec<(EdgeKey, Money)> = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .map(|e| (e.key(), e.weight))
            .collect();
        edges.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        edges
    }

    /// Whether `tree` is a spanning tree of `span` using only graph edges.
    pub fn is_tree_over(&self, tree: &BTreeSet<EdgeKey>, span: &BTreeSet<Id>) -> bool {
        let weights = self.weights();
        if tree.len() + 1 != span.len().max(1) {
            return false;
        }
        let mut uf = UnionFind::new(span.iter().cloned());
        tree.iter().all(|e| {
            weights.contains_key(e) && span.contains(&e.0) && span.contains(&e.1) && uf.union(&e.0, &e.1)
        })
    }

    pub fn tree_weight(&self, tree: &BTreeSet<EdgeKey>) -> Result<Money> {
        let weights = self.weights();
        tree.iter()
            .map(|e| {
                weights
                    .get(e)
                    .copied()
                    .ok_or_else(|| Error::InvalidChoice(format!("edge {e} is not in the graph")))
            })
            .sum()
    }
}

pub(crate) struct UnionFind {
    index: BTreeMap<Id, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(vertices: impl IntoIterator<Item = Id>) -> UnionFind {
        let index: BTreeMap<Id, usize> = vertices.into_iter().enumerate().map(|(i, v)| (v, i)).collect();
        let parent = (0..index.len()).collect();
        UnionFind { index, parent }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the components of `a` and `b`; false if already joined.
    pub(crate) fn union(&mut self, a: &Id, b: &Id) -> bool {
        let (ia, ib) = (self.index[a], self.index[b]);
        let (ra, rb) = (self.find(ia), self.find(ib));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Kruskal over `span`; `None` when the induced subgraph is disconnected.
fn kruskal(g: &WeightedGraph, span: &BTreeSet<Id>) -> Option<TreeSolution> {
    let mut uf = UnionFind::new(span.iter().cloned());
    let mut edges = BTreeSet::new();
    let mut weight = Money::ZERO;
    for (key, w) in g.induced_sorted(span) {
        if uf.union(&key.0, &key.1) {
            edges.insert(key);
            weight += w;
        }
    }
    (edges.len() + 1 >= span.len()).then_some(TreeSolution {
        edges,
        steiner: BTreeSet::new(),
        weight,
    })
}

/// Minimum spanning tree over the required vertices `A`.
///
/// Kruskal with edges ordered by weight and then by key, which returns the
/// minimum tree whose sorted edge list is lexicographically smallest.
pub fn minimum_spanning_tree(g: &WeightedGraph) -> Result<TreeSolution> {
    g.validate()?;
    kruskal(g, &g.vertices).ok_or(Error::NoSpanningTree)
}

pub const STEINER_CANDIDATE_CAP: usize = 15;

/// Minimum Steiner tree connecting `terminals`.
///
/// Every other vertex of the graph is a potential Steiner vertex. For each
/// subset `Z'` of candidates the cheapest tree on `terminals ∪ Z'` is the MST
/// of the induced subgraph, so enumerating subsets is exact.
pub fn steiner_tree(g: &WeightedGraph, terminals: &BTreeSet<Id>) -> Result<TreeSolution> {
    g.validate()?;
    let all = g.all_vertices();
    if let Some(t) = terminals.iter().find(|t| !all.contains(*t)) {
        return Err(Error::InvalidInstance(format!("terminal {t} is not a vertex")));
    }
    let candidates: Vec<Id> = all.difference(terminals).cloned().collect();
    if candidates.len() > STEINER_CANDIDATE_CAP {
        return Err(Error::TooLarge {
            what: "Steiner candidate set",
            size: candidates.len() as u64,
            cap: STEINER_CANDIDATE_CAP as u64,
        });
    }
    let mut best: Option<TreeSolution> = None;
    for mask in 0u32..(1 << candidates.len()) {
        let used: BTreeSet<Id> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        let span: BTreeSet<Id> = terminals.union(&used).cloned().collect();
        let Some(mut tree) = kruskal(g, &span) else {
            continue;
        };
        tree.steiner = used;
        let better = match &best {
            None => true,
            Some(b) => (tree.weight, &tree.steiner, &tree.edges) < (b.weight, &b.steiner, &b.edges),
        };
        if better {
            best = Some(tree);
        }
    }
    best.ok_or_else(|| Error::Infeasible("no Steiner vertex subset connects the terminals".into()))
}
