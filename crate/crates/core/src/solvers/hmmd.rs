//! Morphological clique synthesis over ordinal estimates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::scales::{dominates_quality, CompatibilityValue, CountVector, Dominance, QualityVector};

/// A design alternative with its priority (1 = best).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: Id,
    pub priority: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: Id,
    pub alternatives: Vec<Alternative>,
}

/// Ordinal compatibility between two alternatives of different components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compatibility {
    pub a: Id,
    pub b: Id,
    pub w: u8,
}

/// A modular system: components, their alternatives, and the pairwise
/// compatibility table. Missing pairs are incompatible (0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphSystem {
    /// Number of priority levels `k`.
    pub levels: u8,
    /// Best compatibility value `l`.
    pub compat_max: u8,
    pub components: Vec<Component>,
    pub compatibility: Vec<Compatibility>,
}

/// One alternative per component, with its quality vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeSolution {
    pub choice: Vec<Id>,
    pub quality: QualityVector,
}

impl fmt::Display for CompositeSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", join_choice(&self.choice), self.quality)
    }
}

pub fn join_choice(choice: &[Id]) -> String {
    choice.iter().map(Id::as_str).collect::<Vec<_>>().join("*")
}

fn pair(a: &Id, b: &Id) -> (Id, Id) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Indexed view of a validated system.
pub(crate) struct Indexed<'a> {
    pub sys: &'a MorphSystem,
    owner: BTreeMap<&'a Id, (usize, u8)>,
    compat: BTreeMap<(Id, Id), u8>,
}

impl<'a> Indexed<'a> {
    pub fn new(sys: &'a MorphSystem) -> Result<Indexed<'a>> {
        if sys.levels == 0 {
            return Err(Error::InvalidInstance("priority scale needs k >= 1".into()));
        }
        let mut owner = BTreeMap::new();
        for (c, comp) in sys.components.iter().enumerate() {
            if comp.alternatives.is_empty() {
                return Err(Error::InvalidInstance(format!("component {} has no alternatives", comp.id)));
            }
            for alt in &comp.alternatives {
                if alt.priority == 0 || alt.priority > sys.levels {
                    return Err(Error::InvalidInstance(format!(
                        "priority {} of {} outside [1..{}]",
                        alt.priority, alt.id, sys.levels
                    )));
                }
                if owner.insert(&alt.id, (c, alt.priority)).is_some() {
                    return Err(Error::InvalidInstance(format!("duplicate alternative {}", alt.id)));
                }
            }
        }
        let mut compat = BTreeMap::new();
        for e in &sys.compatibility {
            let (ca, cb) = match (owner.get(&e.a), owner.get(&e.b)) {
                (Some(a), Some(b)) => (a.0, b.0),
                _ => {
                    return Err(Error::InvalidInstance(format!(
                        "compatibility entry {}-{} names an unknown alternative",
                        e.a, e.b
                    )))
                }
            };
            if ca == cb {
                return Err(Error::InvalidInstance(format!(
                    "compatibility entry {}-{} joins alternatives of one component",
                    e.a, e.b
                )));
            }
            if e.w > sys.compat_max {
                return Err(Error::InvalidInstance(format!(
                    "compatibility {} outside [0..{}]",
                    e.w, sys.compat_max
                )));
            }
            compat.insert(pair(&e.a, &e.b), e.w);
        }
        Ok(Indexed { sys, owner, compat })
    }

    pub fn compat(&self, a: &Id, b: &Id) -> u8 {
        self.compat.get(&pair(a, b)).copied().unwrap_or(0)
    }

    pub fn priority(&self, id: &Id) -> Option<(usize, u8)> {
        self.owner.get(id).copied()
    }

    pub fn product_size(&self) -> u128 {
        self.sys
            .components
            .iter()
            .map(|c| c.alternatives.len() as u128)
            .product()
    }

    pub fn evaluate(&self, choice: &[Id]) -> Result<QualityVector> {
        let m = self.sys.components.len();
        if choice.len() != m {
            return Err(Error::InvalidChoice(format!(
                "{} alternatives given for {m} components",
                choice.len()
            )));
        }
        let mut n = CountVector::zeros(usize::from(self.sys.levels));
        for (c, id) in choice.iter().enumerate() {
            match self.priority(id) {
                Some((owner, prio)) if owner == c => n.bump(prio),
                Some(_) => {
                    return Err(Error::InvalidChoice(format!(
                        "{id} does not belong to component {}",
                        self.sys.components[c].id
                    )))
                }
                None => return Err(Error::InvalidChoice(format!("unknown alternative {id}"))),
            }
        }
        let mut w = self.sys.compat_max;
        for i in 0..m {
            for j in i + 1..m {
                w = w.min(self.compat(&choice[i], &choice[j]));
            }
        }
        Ok(QualityVector::new(CompatibilityValue::new(w, self.sys.compat_max)?, n))
    }
}

/// Quality `N(S)` of a composite: the weakest pairwise compatibility and the
/// priority tally. A single-component system has no pairs and scores the
/// best compatibility.
pub fn evaluate_composite(sys: &MorphSystem, choice: &[Id]) -> Result<QualityVector> {
    Indexed::new(sys)?.evaluate(choice)
}

pub const HMMD_PRODUCT_CAP: u128 = 1_000_000;

/// All admissible (`w >= 1`) composites on the Pareto front of `N(S)`.
///
/// Depth-first composition that abandons a partial composite as soon as two
/// of its alternatives are incompatible, feeding complete composites into a
/// non-dominated archive. Output is sorted by choice.
pub fn hmmd_synthesize(sys: &MorphSystem) -> Result<Vec<CompositeSolution>> {
    let idx = Indexed::new(sys)?;
    let size = idx.product_size();
    if size > HMMD_PRODUCT_CAP {
        return Err(Error::TooLarge {
            what: "composite search space",
            size: u64::try_from(size).unwrap_or(u64::MAX),
            cap: HMMD_PRODUCT_CAP as u64,
        });
    }
    let mut archive: Vec<CompositeSolution> = Vec::new();
    let mut choice = Vec::with_capacity(sys.components.len());
    compose(&idx, &mut choice, &mut archive)?;
    if archive.is_empty() {
        return Err(Error::Infeasible("no composite has all pairs compatible".into()));
    }
    archive.sort_by(|a, b| a.choice.cmp(&b.choice));
    Ok(archive)
}

fn compose(idx: &Indexed, choice: &mut Vec<Id>, archive: &mut Vec<CompositeSolution>) -> Result<()> {
    let depth = choice.len();
    if depth == idx.sys.components.len() {
        let quality = idx.evaluate(choice)?;
        insert_nondominated(archive, CompositeSolution { choice: choice.clone(), quality })?;
        return Ok(());
    }
    for alt in &idx.sys.components[depth].alternatives {
        if choice.iter().any(|prev| idx.compat(prev, &alt.id) == 0) {
            continue;
        }
        choice.push(alt.id.clone());
        compose(idx, choice, archive)?;
        choice.pop();
    }
    Ok(())
}

fn insert_nondominated(archive: &mut Vec<CompositeSolution>, cand: CompositeSolution) -> Result<()> {
    let mut k = 0;
    while k < archive.len() {
        match dominates_quality(&archive[k].quality, &cand.quality)? {
            Dominance::Dominates => return Ok(()),
            Dominance::DominatedBy => {
                archive.swap_remove(k);
            }
            _ => k += 1,
        }
    }
    archive.push(cand);
    Ok(())
}

/// Best compatibility and lowest deficiency reached anywhere on a front.
pub fn ideal_point(front: &[CompositeSolution]) -> Option<(CompatibilityValue, u32)> {
    let w = front.iter().map(|c| c.quality.w).max_by_key(|w| w.value())?;
    let def = front.iter().map(|c| c.quality.n.deficiency()).min()?;
    Some((w, def))
}

#[allow(dead_code)]
pub(crate) fn distinct_components(sys: &MorphSystem) -> BTreeSet<&Id> {
    sys.components.iter().map(|c| &c.id).collect()
}
