use mpg_core::{CoreError, Rat};

use crate::trace::SolverTrace;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Core(#[from] CoreError),
    /// The per-discount switch budget ran out. The bound is a theorem, so
    /// hitting the cap on a legal input signals a bug, not slow input.
    #[error("switch cap of {cap} hit at discount {gamma}")]
    SwitchCapHit {
        cap: u64,
        gamma: Rat,
        trace: Box<SolverTrace>,
    },
    /// The discount (or precision) update budget ran out before the halting
    /// test passed.
    #[error("no halt within {budget} discount updates")]
    GammaBudgetExhausted { budget: u64, trace: Box<SolverTrace> },
}

impl SolveError {
    /// The partial trace attached to a cap error, if any.
    pub fn trace(&self) -> Option<&SolverTrace> {
        match self {
            SolveError::Core(_) => None,
            SolveError::SwitchCapHit { trace, .. } => Some(trace),
            SolveError::GammaBudgetExhausted { trace, .. } => Some(trace),
        }
    }
}
