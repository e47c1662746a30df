use serde::{Deserialize, Serialize};

use super::{check_budget, ChangeCosts, ChangeKind, ChangeOp, Proximity, RestructurePlan, Solution};
use crate::error::{Error, Result};
use crate::id::Id;
use crate::money::Money;
use crate::scales::{compat_improvement_steps, pareto_front_min, CompatibilityValue, QualityVector};
use crate::solvers::hmmd::{ideal_point, Indexed, HMMD_PRODUCT_CAP};
use crate::solvers::{hmmd_synthesize, CompositeSolution, MorphSystem};

/// Budget on the change `T⁰ → T*`: either a number of replaced components
/// or money, where replacing `x` by `y` costs `h⁻(x) + h⁺(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "unit", rename_all = "kebab-case")]
pub enum HmmdBudget {
    Ops { limit: u32 },
    Money { limit: Money, costs: ChangeCosts },
}

impl HmmdBudget {
    pub fn unlimited_ops() -> HmmdBudget {
        HmmdBudget::Ops { limit: u32::MAX }
    }

    fn validate(&self) -> Result<()> {
        match self {
            HmmdBudget::Ops { .. } => Ok(()),
            HmmdBudget::Money { limit, costs } => {
                check_budget(*limit)?;
                costs.validate()
            }
        }
    }

    /// Cost of one replacement; `None` when unavailable.
    fn step(&self, from: &Id, to: &Id) -> Option<Money> {
        match self {
            HmmdBudget::Ops { .. } => Some(Money::from_units(1)),
            HmmdBudget::Money { costs, .. } => Some(costs.delete_cost(from)? + costs.add_cost(to)?),
        }
    }

    fn admits(&self, cost: Money) -> bool {
        match self {
            HmmdBudget::Ops { limit } => cost <= Money::from_units(i64::from(*limit)),
            HmmdBudget::Money { limit, .. } => cost <= *limit,
        }
    }
}

/// Goal reference for proximity: best compatibility and lowest deficiency
/// on the goal-stage Pareto front.
pub(crate) struct HmmdGoal {
    pub w: CompatibilityValue,
    pub deficiency: u32,
}

impl HmmdGoal {
    pub fn of(goal: &MorphSystem) -> Result<HmmdGoal> {
        let front = hmmd_synthesize(goal)?;
        let (w, deficiency) = ideal_point(&front).expect("front is never empty");
        Ok(HmmdGoal { w, deficiency })
    }

    pub fn proximity(&self, q: &QualityVector) -> Result<Proximity> {
        Ok(Proximity::Steps {
            elements: q.n.deficiency().saturating_sub(self.deficiency),
            compatibility: compat_improvement_steps(q.w, self.w)?,
        })
    }
}

fn plan_for(
    idx: &Indexed,
    t0: &[Id],
    choice: &[Id],
    budget: &HmmdBudget,
    goal: &HmmdGoal,
) -> Result<Option<RestructurePlan>> {
    let mut ops = Vec::new();
    let mut cost = Money::ZERO;
    for ((comp, from), to) in idx.sys.components.iter().zip(t0).zip(choice) {
        if from == to {
            continue;
        }
        let Some(h) = budget.step(from, to) else { return Ok(None) };
        cost += h;
        ops.push(ChangeOp::new(ChangeKind::ReplaceInGroup, comp.id.clone(), h).moving(from.clone(), to.clone()));
    }
    let quality = idx.evaluate(choice)?;
    let proximity = goal.proximity(&quality)?;
    Ok(Some(RestructurePlan {
        ops,
        cost,
        gain: Money::ZERO,
        proximity,
        solution: Solution::Composite(CompositeSolution { choice: choice.to_vec(), quality }),
    }))
}

/// Evaluate the change of `t0` into one specific goal-stage composite.
pub fn hmmd_plan(t0: &[Id], goal: &MorphSystem, target: &[Id], budget: &HmmdBudget) -> Result<RestructurePlan> {
    budget.validate()?;
    let idx = Indexed::new(goal)?;
    check_shape(&idx, t0)?;
    let g = HmmdGoal::of(goal)?;
    plan_for(&idx, t0, target, budget, &g)?
        .ok_or_else(|| Error::InvalidChoice("a replacement has no listed cost".into()))
}

fn check_shape(idx: &Indexed, t0: &[Id]) -> Result<()> {
    if t0.len() != idx.sys.components.len() {
        return Err(Error::InvalidChoice(format!(
            "current composite has {} parts for {} components",
            t0.len(),
            idx.sys.components.len()
        )));
    }
    Ok(())
}

/// Pareto-efficient changes of `t0` over (change cost `H`, `ρ₁`, `ρ₂`).
///
/// Every admissible goal-stage composite within budget is scored; `H`
/// counts each component whose alternative differs (including ones that no
/// longer exist), or sums money costs. Plans come ordered by `(H, ρ₁, ρ₂)`
/// and then by composite.
pub fn restructure_hmmd(t0: &[Id], goal: &MorphSystem, budget: &HmmdBudget) -> Result<Vec<RestructurePlan>> {
    budget.validate()?;
    let idx = Indexed::new(goal)?;
    check_shape(&idx, t0)?;
    let size = idx.product_size();
    if size > HMMD_PRODUCT_CAP {
        return Err(Error::TooLarge {
            what: "composite search space",
            size: u64::try_from(size).unwrap_or(u64::MAX),
            cap: HMMD_PRODUCT_CAP as u64,
        });
    }
    let g = HmmdGoal::of(goal)?;
    let mut plans = Vec::new();
    let mut choice = Vec::new();
    enumerate(&idx, 0, &mut choice, &mut |c| {
        if let Some(p) = plan_for(&idx, t0, c, budget, &g)? {
            if budget.admits(p.cost) {
                plans.push(p);
            }
        }
        Ok(())
    })?;
    if plans.is_empty() {
        return Err(Error::Infeasible("no admissible composite within budget".into()));
    }
    let vectors: Vec<Vec<Money>> = plans
        .iter()
        .map(|p| std::iter::once(p.cost).chain(p.proximity.components()).collect())
        .collect();
    let keep = pareto_front_min(&vectors)?;
    let mut front: Vec<(Vec<Money>, RestructurePlan)> =
        keep.into_iter().map(|i| (vectors[i].clone(), plans[i].clone())).collect();
    front.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| choice_of(&a.1).cmp(choice_of(&b.1))));
    Ok(front.into_iter().map(|(_, p)| p).collect())
}

fn choice_of(p: &RestructurePlan) -> &[Id] {
    match &p.solution {
        Solution::Composite(c) => &c.choice,
        _ => &[],
    }
}

/// Admissible composites only (all pairs compatible).
fn enumerate(
    idx: &Indexed,
    depth: usize,
    choice: &mut Vec<Id>,
    visit: &mut dyn FnMut(&[Id]) -> Result<()>,
) -> Result<()> {
    if depth == idx.sys.components.len() {
        return visit(choice);
    }
    for alt in &idx.sys.components[depth].alternatives {
        if choice.iter().any(|p| idx.compat(p, &alt.id) == 0) {
            continue;
        }
        choice.push(alt.id.clone());
        enumerate(idx, depth + 1, choice, visit)?;
        choice.pop();
    }
    Ok(())
}
