use mpg_core::CoreError;
use mpg_oracle::OracleError;
use mpg_rand::RandError;
use mpg_solve::SolveError;

#[derive(Debug, thiserror::Error)]
pub enum ExpError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Rand(#[from] RandError),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl ExpError {
    /// True when the failure is an exhausted iteration or scan budget
    /// rather than a malformed input; the CLI maps these to exit code 3.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            ExpError::Solve(SolveError::GammaBudgetExhausted { .. })
                | ExpError::Solve(SolveError::SwitchCapHit { .. })
                | ExpError::Oracle(OracleError::BudgetExhausted { .. })
        )
    }
}
