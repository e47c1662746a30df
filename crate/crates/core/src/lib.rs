//! Combinatorial solvers and their restructuring counterparts.

pub mod error;
pub mod id;
pub mod money;
pub mod oracle;
pub mod multistage;
pub mod scales;
pub mod restructure;
pub mod solvers;

pub use error::{Error, Result};
pub use id::{ids, Id};
pub use money::Money;
pub use scales::{
    dominates_counts, dominates_min, dominates_quality, pareto_front, pareto_front_min,
    CompatibilityValue, CountVector, Dominance, OrdinalValue, QualityVector,
};
