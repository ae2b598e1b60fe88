//! Solvers that see the weights only through a truncating oracle.  Each
//! phase queries at a halved accuracy, runs policy iteration on the served
//! weights, and halts once the current pair is provably optimal for every
//! weight vector the oracle's answers still allow.

use mpg_core::{
    blackwell_bias_zero_player, check_ergodic_equation, cycle_structure,
    discounted_value_zero_player, CoreError, ErgodicSolution, FunctionalGraph, Game, Player,
    PolicyPair, Rat, WeightVector,
};
use num::{BigInt, One, Zero};

use crate::config::{ArithmeticMode, SolverConfig};
use crate::discounted::{initial_pair, record_phase, run_discounted_pi};
use crate::error::SolveError;
use crate::mpg::strict_certificate;
use crate::oracle_model::WeightOracle;
use crate::result::{GameValue, SolveResult};
use crate::switching::{eval_values, switch_pass};
use crate::trace::{HaltReason, SolverTrace};

/// Pessimistic and optimistic variants of a served game: edges chosen by
/// `pair` keep their weight, every other edge moves down by `delta` in the
/// first game and up by `delta` in the second.  A pair optimal in both
/// variants stays optimal for any weight vector within `delta` of the
/// served one that agrees on the policy edges.
pub fn bracketing_games(g: &Game, pair: &PolicyPair, delta: &Rat) -> (Game, Game) {
    let mut low = Vec::with_capacity(g.m());
    let mut high = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let edge = g.edge(e);
        if pair.uses_edge(edge.from, edge.to) {
            low.push(edge.weight.clone());
            high.push(edge.weight.clone());
        } else {
            low.push(&edge.weight - delta);
            high.push(&edge.weight + delta);
        }
    }
    (
        g.with_weights(&WeightVector(low)),
        g.with_weights(&WeightVector(high)),
    )
}

fn require_exact(config: &SolverConfig) -> Result<(), SolveError> {
    if config.mode.is_exact() {
        Ok(())
    } else {
        Err(SolveError::Core(CoreError::Domain(
            "truncated solvers require exact arithmetic".to_string(),
        )))
    }
}

fn require_matching_oracle(g: &Game, oracle: &WeightOracle) -> Result<(), SolveError> {
    if oracle.m() == g.m() {
        Ok(())
    } else {
        Err(SolveError::Core(CoreError::Domain(format!(
            "oracle serves {} weights for a game with {} edges",
            oracle.m(),
            g.m()
        ))))
    }
}

fn pair_is_optimal(
    game: &Game,
    pair: &PolicyPair,
    gamma: &Rat,
    mode: ArithmeticMode,
) -> Result<bool, CoreError> {
    let values = eval_values(game, None, pair, gamma, mode)?;
    let (_, max_moves) = switch_pass(game, None, pair, gamma, Player::Max, mode, &values);
    let (_, min_moves) = switch_pass(game, None, pair, gamma, Player::Min, mode, &values);
    Ok(max_moves.is_empty() && min_moves.is_empty())
}

/// Mean-payoff solve against a weight oracle.  The graph of `g` fixes the
/// shape; the oracle's hidden vector replaces `g`'s weights.  The reported
/// value and bias come from the final served weights, so they sit within
/// the final query accuracy of the hidden instance's value; the pair is
/// exactly optimal for the hidden instance.
pub fn solve_mpg_truncated(
    g: &Game,
    oracle: &mut WeightOracle,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    require_exact(config)?;
    require_matching_oracle(g, oracle)?;
    let mut trace = SolverTrace::new(false);
    let mut pair = initial_pair(g, config);
    let mut gamma = Rat::zero();
    let mut eps = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    let adj_scale = Rat::from_integer(BigInt::from(2 * g.n() as u64));

    for phase in 1..=config.max_gamma_updates {
        gamma = (Rat::one() + &gamma) * &half;
        eps *= &half;
        let served = oracle.query(&eps)?;
        let gt = g.with_weights(&served);
        let outcome = run_discounted_pi(&gt, None, pair, &gamma, config, &mut trace, phase)?;
        pair = outcome.pair.clone();

        // The halting test needs a well-defined constant value and bias,
        // which the pair only provides when it induces a single cycle.
        let in_xi = cycle_structure(&FunctionalGraph::from_policies(&gt, &pair)).single_cycle;
        let mut solved = None;
        if in_xi {
            let sol = blackwell_bias_zero_player(&gt, &pair);
            let candidate = ErgodicSolution {
                lambda: sol.lambda[0].clone(),
                u: sol.u,
            };
            // Off-policy weights may each be off by up to eps in either
            // direction once amplified along a play, bounded by 2 n eps.
            // The served solution certifies the hidden instance when it
            // solves the ergodic equation under both bracketing shifts;
            // both shifted games share the candidate because they agree
            // with the served game on every policy edge.
            let (low_g, high_g) = bracketing_games(&gt, &pair, &(&adj_scale * &eps));
            if check_ergodic_equation(&low_g, &candidate).solves
                && check_ergodic_equation(&high_g, &candidate).solves
            {
                solved = Some(candidate);
            }
        }
        record_phase(
            &mut trace,
            config,
            phase,
            &gamma,
            Some(&eps),
            Some(in_xi),
            !in_xi,
            &outcome,
        );
        trace.oracle_bits = Some(oracle.bits_charged());
        if let Some(candidate) = solved {
            trace.halt = Some(HaltReason::ErgodicSolved);
            let certificate = strict_certificate(&gt, &pair);
            return Ok(SolveResult {
                pair,
                value: GameValue::MeanPayoff {
                    lambda: candidate.lambda,
                    u: candidate.u,
                },
                trace,
                certificate,
            });
        }
    }
    trace.halt = Some(HaltReason::CapHit);
    Err(SolveError::GammaBudgetExhausted {
        budget: config.max_gamma_updates,
        trace: Box::new(trace),
    })
}

/// Discounted solve at `gamma_bar` against a weight oracle.  Halts once the
/// pair is optimal at `gamma_bar` in both bracketing games, which certifies
/// optimality for the hidden weights; the reported values are those of the
/// final served weights.
pub fn solve_discounted_truncated(
    g: &Game,
    oracle: &mut WeightOracle,
    gamma_bar: &Rat,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    require_exact(config)?;
    require_matching_oracle(g, oracle)?;
    if gamma_bar <= &Rat::zero() || gamma_bar >= &Rat::one() {
        return Err(SolveError::Core(CoreError::BadDiscount(gamma_bar.clone())));
    }
    let mut trace = SolverTrace::new(false);
    let mut pair = initial_pair(g, config);
    let mut gamma = Rat::zero();
    let mut eps = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    // Weight error eps propagates into discounted values with gain at most
    // 2 / ((1 - gamma_bar) * gamma_bar^n) along any play.
    let gain_denom =
        (Rat::one() - gamma_bar) * (0..g.n()).fold(Rat::one(), |acc, _| acc * gamma_bar);

    for phase in 1..=config.max_gamma_updates {
        gamma = ((Rat::one() + &gamma) * &half).min(gamma_bar.clone());
        eps *= &half;
        let served = oracle.query(&eps)?;
        let gt = g.with_weights(&served);
        let outcome = run_discounted_pi(&gt, None, pair, &gamma, config, &mut trace, phase)?;
        pair = outcome.pair.clone();

        let delta = Rat::from_integer(2.into()) * &eps / &gain_denom;
        let (low_g, high_g) = bracketing_games(&gt, &pair, &delta);
        let fixed = pair_is_optimal(&low_g, &pair, gamma_bar, config.mode)
            .map_err(SolveError::Core)?
            && pair_is_optimal(&high_g, &pair, gamma_bar, config.mode)
                .map_err(SolveError::Core)?;
        record_phase(
            &mut trace,
            config,
            phase,
            &gamma,
            Some(&eps),
            None,
            false,
            &outcome,
        );
        trace.oracle_bits = Some(oracle.bits_charged());
        if fixed {
            trace.halt = Some(HaltReason::FixedAtTarget);
            let value =
                discounted_value_zero_player(&gt, &pair, gamma_bar).map_err(SolveError::Core)?;
            return Ok(SolveResult {
                pair,
                value: GameValue::Discounted(value),
                trace,
                certificate: None,
            });
        }
    }
    trace.halt = Some(HaltReason::CapHit);
    Err(SolveError::GammaBudgetExhausted {
        budget: config.max_gamma_updates,
        trace: Box::new(trace),
    })
}
