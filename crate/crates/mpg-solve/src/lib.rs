//! Policy-iteration solvers for deterministic two-player mean-payoff and
//! discounted games.
//!
//! The entry points share one engine: evaluate the zero-player game induced
//! by a policy pair in closed form, switch one player's policy to the
//! argbest edges, and iterate with Min's best responses wrapped around
//! Max's.  [`discounted_pi`] runs that engine at a fixed discount;
//! [`solve_discounted`] and [`solve_mpg`] drive the discount toward a
//! target (or toward 1) and halt with an exact optimality or
//! ergodic-equation test.  [`solve_discounted_truncated`] and
//! [`solve_mpg_truncated`] see the weights only through a [`WeightOracle`]
//! and halt once the answer is provably independent of the bits the oracle
//! has not revealed.
//!
//! All solvers work in exact rational arithmetic by default; the
//! non-truncated ones also run in `f64` under
//! [`ArithmeticMode::Float`].  Every run returns a [`SolveResult`] whose
//! [`SolverTrace`] records per-phase switch counts and supports JSON-lines
//! export.

mod config;
mod discounted;
mod error;
mod float_eval;
mod mpg;
mod oracle_model;
mod result;
mod switching;
mod trace;
mod truncated;

pub use config::{ArithmeticMode, SolverConfig, TraceVerbosity};
pub use discounted::{discounted_pi, solve_discounted};
pub use error::SolveError;
pub use mpg::solve_mpg;
pub use oracle_model::{truncation_step, WeightOracle};
pub use result::{GameValue, SolveResult};
pub use switching::switch_player;
pub use trace::{HaltReason, PhaseRecord, SolverTrace, SwitchRecord};
pub use truncated::{bracketing_games, solve_discounted_truncated, solve_mpg_truncated};
