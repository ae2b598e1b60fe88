//! Core model for two-player mean-payoff and discounted games on finite
//! directed graphs, plus the exact machinery that everything downstream
//! builds on: zero-player (fixed-policy) evaluation, ergodic-equation
//! checks, polyhedral cone certificates, and the condition number Δ.
//!
//! All weights and values are exact rationals. Strict inequalities decide
//! cone membership and uniqueness questions, so nothing in this crate
//! rounds.

pub mod ergodic;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod rat;
pub mod zero_player;

pub use ergodic::{
    check_ergodic_equation, condition_number, cone_membership, is_ergodic_bruteforce,
    theory_bounds, z_threshold, ConditionReport, ConeCertificate, ErgodicSolution,
    ErgodicityReport, ErgodicityWitness, ResidualReport, TailThreshold, TheoryBounds,
};
pub use error::{CoreError, Violation};
pub use fixtures::{paper_fixture, FixtureParams};
pub use game::{
    scale_shift_weights, validate_game, Edge, Game, Player, PolicyPair, ValidationReport,
    WeightVector,
};
pub use io::{load_game, save_game};
pub use rat::{
    floor_to_fractional_bits, integer_part_bits, rat, rat_from_f64, rat_from_str, rat_to_f64,
    rat_to_string, Rat,
};
pub use zero_player::{
    blackwell_bias_fg, blackwell_bias_zero_player, cycle_structure, discounted_residual,
    discounted_value_fg, discounted_value_zero_player, mean_value_and_bias,
    mean_value_and_bias_fg, CycleDecomposition, DiscountedValueVector, FunctionalGraph,
    MeanBiasSolution,
};
