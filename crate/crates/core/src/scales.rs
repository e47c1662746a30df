//! Ordinal and vector quality scales.
//!
//! A composite design is rated by a [`QualityVector`] `(w; n)`: `w` is the
//! weakest pairwise compatibility among its parts and `n` counts how many
//! parts sit at each quality level (level 1 is best). Count vectors are
//! ordered by prefix sums, which yields the lattice-like poset drawn for
//! three levels and four parts:
//!
//! ```text
//!            <4,0,0>
//!               |
//!            <3,1,0>
//!           /       \
//!      <3,0,1>    <2,2,0>
//!           \     /     \
//!          <2,1,1>    <1,3,0>
//!             ...
//! ```

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of comparing two estimates under a partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dominance {
    Equal,
    Dominates,
    DominatedBy,
    Incomparable,
}

impl Dominance {
    pub fn flip(self) -> Dominance {
        match self {
            Dominance::Dominates => Dominance::DominatedBy,
            Dominance::DominatedBy => Dominance::Dominates,
            other => other,
        }
    }

    /// Combine a per-component outcome into a running product-order outcome.
    fn join(self, other: Dominance) -> Dominance {
        use Dominance::*;
        match (self, other) {
            (Equal, x) | (x, Equal) => x,
            (Dominates, Dominates) => Dominates,
            (DominatedBy, DominatedBy) => DominatedBy,
            _ => Incomparable,
        }
    }

    fn from_ordering(ord: Ordering) -> Dominance {
        match ord {
            Ordering::Greater => Dominance::Dominates,
            Ordering::Less => Dominance::DominatedBy,
            Ordering::Equal => Dominance::Equal,
        }
    }
}

/// A rank on an ordinal scale `[1..k]`; 1 is the best level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrdinalValue {
    level: u8,
    k: u8,
}

impl OrdinalValue {
    pub fn new(level: u8, k: u8) -> Result<OrdinalValue> {
        if k == 0 || level == 0 || level > k {
            return Err(Error::ScaleMismatch(format!(
                "ordinal level {level} outside scale [1..{k}]"
            )));
        }
        Ok(OrdinalValue { level, k })
    }

    pub fn level(self) -> u8 {
        self.level
    }

    pub fn scale(self) -> u8 {
        self.k
    }
}

/// A compatibility estimate on `[0..l]`; `l` is best, 0 means incompatible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompatibilityValue {
    value: u8,
    max: u8,
}

impl CompatibilityValue {
    pub fn new(value: u8, max: u8) -> Result<CompatibilityValue> {
        if value > max {
            return Err(Error::ScaleMismatch(format!(
                "compatibility {value} outside scale [0..{max}]"
            )));
        }
        Ok(CompatibilityValue { value, max })
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn scale(self) -> u8 {
        self.max
    }
}

/// Per-level tallies `(n_1, .., n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountVector(Vec<u32>);

impl CountVector {
    pub fn new(counts: Vec<u32>) -> Result<CountVector> {
        if counts.is_empty() {
            return Err(Error::ScaleMismatch("count vector needs k >= 1".into()));
        }
        Ok(CountVector(counts))
    }

    pub fn zeros(k: usize) -> CountVector {
        CountVector(vec![0; k.max(1)])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn bump(&mut self, level: u8) {
        self.0[usize::from(level) - 1] += 1;
    }

    /// Weighted distance from the ideal point: `sum_r (r - 1) * n_r`.
    pub fn deficiency(&self) -> u32 {
        self.0.iter().enumerate().map(|(r, &n)| r as u32 * n).sum()
    }

    fn prefix_sums(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().scan(0, |acc, &n| {
            *acc += n;
            Some(*acc)
        })
    }

    fn check_compatible(&self, other: &CountVector) -> Result<()> {
        if self.k() != other.k() {
            return Err(Error::ScaleMismatch(format!(
                "count vectors over {} and {} levels",
                self.k(),
                other.k()
            )));
        }
        if self.total() != other.total() {
            return Err(Error::ScaleMismatch(format!(
                "count vectors with totals {} and {}",
                self.total(),
                other.total()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// System excellence `N(S) = (w(S); n(S))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QualityVector {
    pub w: CompatibilityValue,
    pub n: CountVector,
}

impl QualityVector {
    pub fn new(w: CompatibilityValue, n: CountVector) -> QualityVector {
        QualityVector { w, n }
    }

    /// Shorthand used heavily in tests: `QualityVector::of(3, 3, &[4, 0, 0])`.
    pub fn of(w: u8, l: u8, counts: &[u32]) -> Result<QualityVector> {
        Ok(QualityVector {
            w: CompatibilityValue::new(w, l)?,
            n: CountVector::new(counts.to_vec())?,
        })
    }
}

impl fmt::Display for QualityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.w.value, self.n)
    }
}

/// Prefix-sum domination of count vectors: `a` dominates `b` when every
/// prefix sum of `a` is at least the matching prefix sum of `b`.
pub fn dominates_counts(a: &CountVector, b: &CountVector) -> Result<Dominance> {
    a.check_compatible(b)?;
    let mut out = Dominance::Equal;
    for (pa, pb) in a.prefix_sums().zip(b.prefix_sums()) {
        out = out.join(Dominance::from_ordering(pa.cmp(&pb)));
        if out == Dominance::Incomparable {
            break;
        }
    }
    Ok(out)
}

/// Product order on `(w; n)`: `w` by value, `n` by [`dominates_counts`].
pub fn dominates_quality(a: &QualityVector, b: &QualityVector) -> Result<Dominance> {
    if a.w.max != b.w.max {
        return Err(Error::ScaleMismatch(format!(
            "compatibility scales [0..{}] and [0..{}]",
            a.w.max, b.w.max
        )));
    }
    let n = dominates_counts(&a.n, &b.n)?;
    Ok(Dominance::from_ordering(a.w.value.cmp(&b.w.value)).join(n))
}

/// Componentwise domination for minimization vectors: `a` dominates `b` when
/// no component of `a` is larger and at least one is smaller.
pub fn dominates_min<T: Ord>(a: &[T], b: &[T]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::ScaleMismatch(format!(
            "vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .fold(Dominance::Equal, |acc, (x, y)| {
            acc.join(Dominance::from_ordering(y.cmp(x)))
        }))
}

/// Ids whose quality vector no other item dominates.
pub fn pareto_front<I: Clone + Ord>(items: &[(I, QualityVector)]) -> Result<BTreeSet<I>> {
    pareto_indices(items.len(), |i, j| dominates_quality(&items[i].1, &items[j].1))
        .map(|idx| idx.into_iter().map(|i| items[i].0.clone()).collect())
}

/// Indices of the non-dominated entries of a minimization vector set.
pub fn pareto_front_min<T: Ord>(vectors: &[Vec<T>]) -> Result<Vec<usize>> {
    pareto_indices(vectors.len(), |i, j| dominates_min(&vectors[i], &vectors[j]))
}

fn pareto_indices(
    len: usize,
    cmp: impl Fn(usize, usize) -> Result<Dominance>,
) -> Result<Vec<usize>> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    let mut front: Vec<usize> = Vec::new();
    'outer: for i in 0..len {
        let mut k = 0;
        while k < front.len() {
            match cmp(front[k], i)? {
                Dominance::Dominates => continue 'outer,
                Dominance::DominatedBy => {
                    front.swap_remove(k);
                }
                _ => k += 1,
            }
        }
        front.push(i);
    }
    front.sort_unstable();
    Ok(front)
}

/// Improvement steps by elements: how far `n` lags behind `goal` in
/// deficiency, clamped at zero.
pub fn element_improvement_steps(n: &CountVector, goal: &CountVector) -> Result<u32> {
    n.check_compatible(goal)?;
    Ok(n.deficiency().saturating_sub(goal.deficiency()))
}

/// Improvement steps by compatibility, clamped at zero.
pub fn compat_improvement_steps(w: CompatibilityValue, goal: CompatibilityValue) -> Result<u32> {
    if w.max != goal.max {
        return Err(Error::ScaleMismatch(format!(
            "compatibility scales [0..{}] and [0..{}]",
            w.max, goal.max
        )));
    }
    Ok(u32::from(goal.value.saturating_sub(w.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(v: &[u32]) -> CountVector {
        CountVector::new(v.to_vec()).unwrap()
    }

    fn qv(w: u8, n: &[u32]) -> QualityVector {
        QualityVector::of(w, 3, n).unwrap()
    }

    #[test]
    fn ideal_point_dominates_chain() {
        assert_eq!(dominates_counts(&cv(&[3, 0, 0]), &cv(&[2, 1, 0])).unwrap(), Dominance::Dominates);
        assert_eq!(dominates_counts(&cv(&[2, 1, 0]), &cv(&[2, 1, 0])).unwrap(), Dominance::Equal);
        assert_eq!(dominates_counts(&cv(&[2, 0, 1]), &cv(&[1, 2, 0])).unwrap(), Dominance::Incomparable);
        assert_eq!(dominates_counts(&cv(&[2, 1, 0]), &cv(&[3, 0, 0])).unwrap(), Dominance::DominatedBy);
    }

    #[test]
    fn count_mismatch_errors() {
        assert!(matches!(dominates_counts(&cv(&[3, 0, 0]), &cv(&[3, 0])), Err(Error::ScaleMismatch(_))));
        assert!(matches!(dominates_counts(&cv(&[3, 0, 0]), &cv(&[2, 0, 0])), Err(Error::ScaleMismatch(_))));
    }

    #[test]
    fn quality_domination() {
        assert_eq!(dominates_quality(&qv(3, &[4, 0, 0]), &qv(1, &[2, 2, 0])).unwrap(), Dominance::Dominates);
        assert_eq!(dominates_quality(&qv(2, &[2, 1, 1]), &qv(2, &[2, 1, 1])).unwrap(), Dominance::Equal);
        assert_eq!(dominates_quality(&qv(1, &[3, 1, 0]), &qv(2, &[2, 2, 0])).unwrap(), Dominance::Incomparable);
        let other_scale = QualityVector::of(1, 4, &[3, 1, 0]).unwrap();
        assert!(dominates_quality(&qv(1, &[3, 1, 0]), &other_scale).is_err());
    }

    #[test]
    fn pareto_examples() {
        let front = pareto_front(&[("x", qv(3, &[4, 0, 0])), ("y", qv(1, &[2, 2, 0]))]).unwrap();
        assert_eq!(front.into_iter().collect::<Vec<_>>(), ["x"]);

        let front = pareto_front(&[("x", qv(2, &[1, 1, 1]))]).unwrap();
        assert_eq!(front.len(), 1);

        let front = pareto_front(&[
            ("x", qv(2, &[2, 2, 0])),
            ("y", qv(1, &[3, 1, 0])),
            ("z", qv(1, &[2, 2, 0])),
        ])
        .unwrap();
        assert_eq!(front.into_iter().collect::<Vec<_>>(), ["x", "y"]);

        let empty: Vec<(u32, QualityVector)> = vec![];
        assert_eq!(pareto_front(&empty), Err(Error::EmptyInput));
    }

    #[test]
    fn equal_vectors_both_kept() {
        let front = pareto_front(&[("a", qv(2, &[2, 2, 0])), ("b", qv(2, &[2, 2, 0]))]).unwrap();
        assert_eq!(front.len(), 2);
    }

    #[test]
    fn improvement_steps() {
        let goal = cv(&[4, 0, 0]);
        assert_eq!(element_improvement_steps(&cv(&[2, 2, 0]), &goal).unwrap(), 2);
        assert_eq!(element_improvement_steps(&cv(&[2, 1, 1]), &goal).unwrap(), 3);
        assert_eq!(element_improvement_steps(&goal, &goal).unwrap(), 0);
        let c = |w| CompatibilityValue::new(w, 3).unwrap();
        assert_eq!(compat_improvement_steps(c(1), c(3)).unwrap(), 2);
        assert_eq!(compat_improvement_steps(c(2), c(3)).unwrap(), 1);
        assert_eq!(compat_improvement_steps(c(3), c(3)).unwrap(), 0);
        assert!(compat_improvement_steps(c(3), CompatibilityValue::new(3, 4).unwrap()).is_err());
    }

    #[test]
    fn ordinal_bounds() {
        assert!(OrdinalValue::new(1, 3).is_ok());
        assert!(OrdinalValue::new(0, 3).is_err());
        assert!(OrdinalValue::new(4, 3).is_err());
        assert!(CompatibilityValue::new(4, 3).is_err());
    }

    #[test]
    fn min_vector_domination() {
        assert_eq!(dominates_min(&[4, 4, 3], &[6, 4, 3]).unwrap(), Dominance::Dominates);
        assert_eq!(dominates_min(&[4, 9], &[6, 5]).unwrap(), Dominance::Incomparable);
        assert_eq!(pareto_front_min(&[vec![4, 4, 3], vec![6, 4, 3]]).unwrap(), vec![0]);
    }

    /// All count vectors over 3 levels summing to 4.
    fn all_k3_total4() -> Vec<CountVector> {
        let mut out = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                out.push(cv(&[a, b, 4 - a - b]));
            }
        }
        out
    }

    #[test]
    fn counts_form_partial_order() {
        let all = all_k3_total4();
        for a in &all {
            assert_eq!(dominates_counts(a, a).unwrap(), Dominance::Equal);
            for b in &all {
                let ab = dominates_counts(a, b).unwrap();
                assert_eq!(dominates_counts(b, a).unwrap(), ab.flip());
                if ab == Dominance::Equal {
                    assert_eq!(a, b);
                }
                for c in &all {
                    let bc = dominates_counts(b, c).unwrap();
                    if ab == Dominance::Dominates && bc == Dominance::Dominates {
                        assert_eq!(dominates_counts(a, c).unwrap(), Dominance::Dominates);
                    }
                }
            }
        }
    }

    #[test]
    fn quality_forms_partial_order() {
        let mut all = Vec::new();
        for w in 0..=3u8 {
            for n in all_k3_total4() {
                all.push(QualityVector::new(CompatibilityValue::new(w, 3).unwrap(), n));
            }
        }
        for a in &all {
            for b in &all {
                let ab = dominates_quality(a, b).unwrap();
                assert_eq!(dominates_quality(b, a).unwrap(), ab.flip());
                assert_eq!(ab == Dominance::Equal, a == b);
                for c in &all {
                    if ab == Dominance::Dominates && dominates_quality(b, c).unwrap() == Dominance::Dominates {
                        assert_eq!(dominates_quality(a, c).unwrap(), Dominance::Dominates);
                    }
                }
            }
        }
    }

    #[test]
    fn shifting_one_unit_up_lowers_deficiency_by_one() {
        for n in all_k3_total4() {
            for r in 1..n.k() {
                if n.counts()[r] > 0 {
                    let mut m = n.counts().to_vec();
                    m[r] -= 1;
                    m[r - 1] += 1;
                    assert_eq!(cv(&m).deficiency() + 1, n.deficiency());
                }
            }
        }
    }

    fn arb_quality() -> impl Strategy<Value = QualityVector> {
        (0u8..=3, 0u32..=4, 0u32..=4).prop_filter_map("total 4", |(w, a, b)| {
            (a + b <= 4).then(|| QualityVector::of(w, 3, &[a, b, 4 - a - b]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn front_sound_and_complete(items in prop::collection::vec(arb_quality(), 1..12)) {
            let tagged: Vec<(usize, QualityVector)> = items.into_iter().enumerate().collect();
            let front = pareto_front(&tagged).unwrap();
            for (i, q) in &tagged {
                let dominated_by_front = front.iter().any(|&j| {
                    dominates_quality(&tagged[j].1, q).unwrap() == Dominance::Dominates
                });
                if front.contains(i) {
                    prop_assert!(!dominated_by_front);
                } else {
                    prop_assert!(dominated_by_front);
                }
            }
        }

        #[test]
        fn steps_non_negative_and_zero_on_self(q in arb_quality()) {
            prop_assert_eq!(element_improvement_steps(&q.n, &q.n).unwrap(), 0);
            prop_assert_eq!(compat_improvement_steps(q.w, q.w).unwrap(), 0);
        }
    }
}
