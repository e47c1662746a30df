use crate::money::Money;
use thiserror::Error;

/// Errors raised by solvers, restructuring and trajectory construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scale mismatch: {0}")]
    ScaleMismatch(String),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid choice: {0}")]
    InvalidChoice(String),

    #[error("invalid change operations: {0}")]
    InvalidOps(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no spanning tree: graph is disconnected")]
    NoSpanningTree,

    /// No solution exists within the change budget. `min_budget` is the
    /// smallest budget that admits a feasible restructuring, when known.
    #[error("infeasible with budget {budget}{}", min_budget.map(|m| format!(" (minimum feasible budget {m})")).unwrap_or_default())]
    InfeasibleWithBudget {
        budget: Money,
        min_budget: Option<Money>,
    },

    #[error("{what} has size {size}, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_stage(self, stage: usize) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
