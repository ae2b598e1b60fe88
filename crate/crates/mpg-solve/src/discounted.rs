//! Policy iteration at a fixed discount, and the increasing-discount solver
//! for a target discount.

use mpg_core::{
    discounted_value_zero_player, CoreError, DiscountedValueVector, Game, Player, PolicyPair, Rat,
};
use num::{One, Zero};

use crate::config::{derived_switch_cap, ArithmeticMode, SolverConfig, TraceVerbosity};
use crate::error::SolveError;
use crate::float_eval::FloatGame;
use crate::result::{GameValue, SolveResult};
use crate::switching::{eval_values, switch_pass, Values};
use crate::trace::{HaltReason, PhaseRecord, SolverTrace, SwitchRecord};

fn rat_to_f64(r: &Rat) -> f64 {
    mpg_core::rat::rat_to_f64(r)
}

pub(crate) struct PhaseOutcome {
    pub pair: PolicyPair,
    pub values: Values,
    pub max_switches: u64,
    pub min_switches: u64,
    pub inner_loops: u64,
    pub outer_loops: u64,
}

impl PhaseOutcome {
    pub fn exact_values(&self) -> Option<&Vec<Rat>> {
        match &self.values {
            Values::Exact(v) => Some(v),
            Values::Float(_) => None,
        }
    }
}

fn record_switch(
    trace: &mut SolverTrace,
    config: &SolverConfig,
    phase: u64,
    player: Player,
    moves: &[(usize, usize)],
) {
    let count = moves.len() as u64;
    trace.total_switches += count;
    match player {
        Player::Max => trace.total_max_switches += count,
        Player::Min => trace.total_min_switches += count,
    }
    if config.verbosity >= TraceVerbosity::Switches {
        trace.switches.push(SwitchRecord {
            phase,
            player,
            moves: moves.to_vec(),
            cumulative: trace.total_switches,
        });
    }
}

/// Exact-mode check that Min's guaranteed vector improved: weakly lower
/// everywhere, strictly somewhere.
fn assert_min_improved(previous: &[Rat], current: &[Rat]) {
    let weakly_lower = previous.iter().zip(current).all(|(p, c)| c <= p);
    let strictly_somewhere = previous.iter().zip(current).any(|(p, c)| c < p);
    assert!(
        weakly_lower && strictly_somewhere,
        "policy iteration lost monotonicity"
    );
}

/// Runs policy iteration to convergence at `gamma`, appending to `trace`.
/// The inner loop drives Max to a best response; the outer loop applies one
/// greedy Min pass per round until Min has no switch.
pub(crate) fn run_discounted_pi(
    g: &Game,
    fg: Option<&FloatGame>,
    pair0: PolicyPair,
    gamma: &Rat,
    config: &SolverConfig,
    trace: &mut SolverTrace,
    phase: u64,
) -> Result<PhaseOutcome, SolveError> {
    let cap = config
        .max_switches
        .unwrap_or_else(|| derived_switch_cap(g.m(), 1.0 - rat_to_f64(gamma)));
    let mut pair = pair0;
    let mut phase_switches = 0u64;
    let mut max_switches = 0u64;
    let mut min_switches = 0u64;
    let mut inner_loops = 0u64;
    let mut outer_loops = 0u64;
    let mut last_outer: Option<Vec<Rat>> = None;

    let check_cap = |phase_switches: u64, trace: &SolverTrace| -> Result<(), SolveError> {
        if phase_switches > cap {
            let mut t = trace.clone();
            t.halt = Some(HaltReason::CapHit);
            return Err(SolveError::SwitchCapHit {
                cap,
                gamma: gamma.clone(),
                trace: Box::new(t),
            });
        }
        Ok(())
    };

    loop {
        outer_loops += 1;
        // Max best response to the current Min policy.
        let values = loop {
            inner_loops += 1;
            let values = eval_values(g, fg, &pair, gamma, config.mode)?;
            let (next, moves) = switch_pass(g, fg, &pair, gamma, Player::Max, config.mode, &values);
            if moves.is_empty() {
                break values;
            }
            phase_switches += moves.len() as u64;
            max_switches += moves.len() as u64;
            record_switch(trace, config, phase, Player::Max, &moves);
            check_cap(phase_switches, trace)?;
            pair = next;
        };

        if config.mode.is_exact() {
            if let Values::Exact(current) = &values {
                if let Some(previous) = &last_outer {
                    assert_min_improved(previous, current);
                }
                last_outer = Some(current.clone());
            }
        }

        let (next, moves) = switch_pass(g, fg, &pair, gamma, Player::Min, config.mode, &values);
        if moves.is_empty() {
            return Ok(PhaseOutcome {
                pair,
                values,
                max_switches,
                min_switches,
                inner_loops,
                outer_loops,
            });
        }
        phase_switches += moves.len() as u64;
        min_switches += moves.len() as u64;
        record_switch(trace, config, phase, Player::Min, &moves);
        check_cap(phase_switches, trace)?;
        pair = next;
    }
}

pub(crate) fn initial_pair(g: &Game, config: &SolverConfig) -> PolicyPair {
    let pair = config
        .initial
        .clone()
        .unwrap_or_else(|| PolicyPair::lowest_index(g));
    assert!(pair.is_valid(g), "initial policy pair must be legal");
    pair
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn record_phase(
    trace: &mut SolverTrace,
    config: &SolverConfig,
    phase: u64,
    gamma: &Rat,
    epsilon: Option<&Rat>,
    in_xi: Option<bool>,
    nonconstant_value: bool,
    outcome: &PhaseOutcome,
) {
    trace.gamma_updates = phase;
    if config.verbosity >= TraceVerbosity::Phases {
        trace.phases.push(PhaseRecord {
            phase,
            gamma: gamma.clone(),
            epsilon: epsilon.cloned(),
            in_xi,
            nonconstant_value,
            max_switches: outcome.max_switches,
            min_switches: outcome.min_switches,
            inner_loops: outcome.inner_loops,
            outer_loops: outcome.outer_loops,
            values: outcome.exact_values().cloned(),
        });
    }
}

fn float_game_for(g: &Game, mode: ArithmeticMode) -> Option<FloatGame> {
    match mode {
        ArithmeticMode::Exact => None,
        ArithmeticMode::Float { .. } => Some(FloatGame::new(g)),
    }
}

fn discounted_values_of(
    g: &Game,
    pair: &PolicyPair,
    gamma: &Rat,
    outcome_values: Values,
) -> Result<DiscountedValueVector, CoreError> {
    match outcome_values {
        Values::Exact(value) => Ok(DiscountedValueVector {
            gamma: gamma.clone(),
            value,
        }),
        Values::Float(_) => discounted_value_zero_player(g, pair, gamma),
    }
}

/// Policy iteration with the greedy all-switches rule at a fixed discount.
pub fn discounted_pi(
    g: &Game,
    pair0: PolicyPair,
    gamma: &Rat,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    assert!(pair0.is_valid(g), "initial policy pair must be legal");
    let fg = float_game_for(g, config.mode);
    let mut trace = SolverTrace::new(!config.mode.is_exact());
    let outcome = run_discounted_pi(g, fg.as_ref(), pair0, gamma, config, &mut trace, 1)?;
    let pair = outcome.pair.clone();
    record_phase(&mut trace, config, 1, gamma, None, None, false, &outcome);
    trace.halt = Some(HaltReason::FixedAtTarget);
    let values = discounted_values_of(g, &pair, gamma, outcome.values)?;
    Ok(SolveResult {
        pair,
        value: GameValue::Discounted(values),
        trace,
        certificate: None,
    })
}

/// Solves the discounted game at `gamma_bar` by policy iteration under an
/// increasing discount: gamma steps through min{(1+gamma)/2, gamma_bar},
/// and the run halts when neither player can switch at gamma_bar.
pub fn solve_discounted(
    g: &Game,
    gamma_bar: &Rat,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    if gamma_bar <= &Rat::zero() || gamma_bar >= &Rat::one() {
        return Err(SolveError::Core(CoreError::BadDiscount(gamma_bar.clone())));
    }
    let fg = float_game_for(g, config.mode);
    let mut trace = SolverTrace::new(!config.mode.is_exact());
    let mut pair = initial_pair(g, config);
    let mut gamma = Rat::zero();
    let half = Rat::new(1.into(), 2.into());

    for phase in 1..=config.max_gamma_updates {
        gamma = ((Rat::one() + &gamma) * &half).min(gamma_bar.clone());
        let outcome =
            run_discounted_pi(g, fg.as_ref(), pair, &gamma, config, &mut trace, phase)?;
        pair = outcome.pair.clone();
        record_phase(&mut trace, config, phase, &gamma, None, None, false, &outcome);

        let at_target = eval_values(g, fg.as_ref(), &pair, gamma_bar, config.mode)?;
        let (_, max_moves) = switch_pass(
            g,
            fg.as_ref(),
            &pair,
            gamma_bar,
            Player::Max,
            config.mode,
            &at_target,
        );
        let (_, min_moves) = switch_pass(
            g,
            fg.as_ref(),
            &pair,
            gamma_bar,
            Player::Min,
            config.mode,
            &at_target,
        );
        if max_moves.is_empty() && min_moves.is_empty() {
            trace.halt = Some(HaltReason::FixedAtTarget);
            let values = discounted_values_of(g, &pair, gamma_bar, at_target)?;
            return Ok(SolveResult {
                pair,
                value: GameValue::Discounted(values),
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

#[cfg(test)]
mod tests {
    use super::*;
    use mpg_core::{paper_fixture, rat, Edge, FixtureParams};

    fn blackwell() -> Game {
        paper_fixture("blackwell", &FixtureParams::default()).unwrap()
    }

    #[test]
    fn blackwell_discounted_pi_at_half() {
        let g = blackwell();
        let config = SolverConfig::default();
        let result = discounted_pi(&g, PolicyPair::lowest_index(&g), &rat(1, 2), &config).unwrap();
        assert_eq!(result.pair.successors(), &[2, 0, 2]);
        let values = result.discounted().unwrap();
        assert_eq!(values.value, vec![rat(-1, 2), rat(-1, 4), rat(0, 1)]);
        assert_eq!(result.trace.halt, Some(HaltReason::FixedAtTarget));
    }

    #[test]
    fn blackwell_min_switch_counts() {
        // Hand-traced run: the three Min passes move {2}, {0}, {1}; the
        // fourth finds no switch.
        let g = blackwell();
        let config = SolverConfig::default().with_verbosity(TraceVerbosity::Switches);
        let result = discounted_pi(&g, PolicyPair::lowest_index(&g), &rat(1, 2), &config).unwrap();
        assert_eq!(result.trace.total_min_switches, 4);
        assert_eq!(result.trace.total_max_switches, 0);
        let moves: Vec<Vec<(usize, usize)>> = result
            .trace
            .switches
            .iter()
            .map(|s| s.moves.clone())
            .collect();
        assert_eq!(
            moves,
            vec![vec![(1, 1), (2, 2)], vec![(0, 2)], vec![(1, 0)]]
        );
    }

    #[test]
    fn zero_player_game_is_already_fixed() {
        let g = Game::new(
            vec![Player::Min, Player::Max],
            vec![
                Edge { from: 0, to: 1, weight: rat(2, 1) },
                Edge { from: 1, to: 0, weight: rat(4, 1) },
            ],
        );
        let pair = PolicyPair::lowest_index(&g);
        let result = discounted_pi(&g, pair.clone(), &rat(1, 2), &SolverConfig::default()).unwrap();
        assert_eq!(result.pair, pair);
        assert_eq!(result.trace.total_switches, 0);
        assert_eq!(result.discounted().unwrap().value[0], rat(8, 3));
    }

    #[test]
    fn blackwell_solve_at_nine_tenths() {
        let g = blackwell();
        let result = solve_discounted(&g, &rat(9, 10), &SolverConfig::default()).unwrap();
        assert_eq!(result.pair.successors(), &[2, 0, 2]);
        assert_eq!(
            result.discounted().unwrap().value,
            vec![rat(-1, 10), rat(-9, 100), rat(0, 1)]
        );
        assert_eq!(result.trace.halt, Some(HaltReason::FixedAtTarget));
    }

    #[test]
    fn float_mode_matches_exact_pair() {
        let g = blackwell();
        let exact = solve_discounted(&g, &rat(9, 10), &SolverConfig::default()).unwrap();
        let float = solve_discounted(
            &g,
            &rat(9, 10),
            &SolverConfig::default().with_mode(ArithmeticMode::float_default()),
        )
        .unwrap();
        assert_eq!(exact.pair, float.pair);
        assert!(float.trace.float_mode);
    }

    #[test]
    fn bad_target_discount() {
        let g = blackwell();
        assert!(matches!(
            solve_discounted(&g, &rat(1, 1), &SolverConfig::default()),
            Err(SolveError::Core(CoreError::BadDiscount(_)))
        ));
    }
}
