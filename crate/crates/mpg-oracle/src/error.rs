use mpg_core::CoreError;

use crate::curve::BreakpointCurve;

/// Errors from the ground-truth computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("game has a vertex not owned by Min")]
    NotOnePlayer,
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("scan budget exhausted; partial curve covers {} pieces", partial.pieces.len())]
    BudgetExhausted { partial: Box<BreakpointCurve> },
}
