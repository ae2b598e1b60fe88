//! Independent ground-truth computations at desk scale: exhaustive
//! policy-pair evaluation for mean-payoff and discounted games, Blackwell
//! threshold estimation on a dyadic grid, Karp's minimum mean cycle,
//! breakpoint curves of the value in one edge weight, and value iteration.
//!
//! Everything favors verifiability over speed: exact rational arithmetic,
//! explicit budgets, and no shared machinery with the iterative solvers
//! being checked.

mod brute;
mod curve;
mod cycles;
mod envelope;
mod error;
mod karp;
mod scan;
mod value_iter;

pub use brute::{
    blackwell_threshold_estimate, brute_force_discounted, brute_force_solve, BruteForceReport,
    DiscountedReport,
};
pub use curve::{curve_to_csv, BreakpointCurve, Piece};
pub use cycles::{cycle_mean, enumerate_simple_cycles};
pub use envelope::{one_player_breakpoints, EdgeThreshold};
pub use error::OracleError;
pub use karp::{karp_min_mean_cycle, KarpReport};
pub use scan::two_player_breakpoint_scan;
pub use value_iter::value_iteration_discounted;
