//! Mean-payoff solver: policy iteration under an increasing discount, with
//! the exact ergodic-equation halting test on the value and Blackwell bias
//! of the current pair.

use mpg_core::{
    blackwell_bias_zero_player, check_ergodic_equation, cone_membership, rat_from_f64, CoreError,
    ErgodicSolution, Game, PolicyPair, Rat,
};
use num::{One, Zero};

use crate::config::{ArithmeticMode, SolverConfig};
use crate::discounted::{initial_pair, record_phase, run_discounted_pi};
use crate::error::SolveError;
use crate::float_eval::{ergodic_residual_f64, mean_and_blackwell_f64, FloatGame};
use crate::result::{GameValue, SolveResult};
use crate::trace::{HaltReason, SolverTrace};

/// Strict-cone certificate of the pair, when one holds.
pub(crate) fn strict_certificate(
    g: &Game,
    pair: &PolicyPair,
) -> Option<mpg_core::ConeCertificate> {
    match cone_membership(g, pair) {
        Ok(cert) if cert.inside_strict => Some(cert),
        _ => None,
    }
}

struct HaltCheck {
    lambda: Rat,
    u: Vec<Rat>,
    nonconstant: bool,
    solves: bool,
}

fn halting_check(
    g: &Game,
    fg: Option<&FloatGame>,
    pair: &PolicyPair,
    mode: ArithmeticMode,
) -> Result<HaltCheck, CoreError> {
    match mode {
        ArithmeticMode::Exact => {
            let sol = blackwell_bias_zero_player(g, pair);
            // With a non-constant zero-player value there is no canonical
            // (lambda, u); any pick is legal for the halting test, and the
            // test cannot pass with one.
            let lambda = sol.lambda[0].clone();
            let report = check_ergodic_equation(
                g,
                &ErgodicSolution {
                    lambda: lambda.clone(),
                    u: sol.u.clone(),
                },
            );
            Ok(HaltCheck {
                lambda,
                u: sol.u,
                nonconstant: !sol.constant_value,
                solves: report.solves,
            })
        }
        ArithmeticMode::Float { tolerance } => {
            let fg = fg.expect("float mode carries a FloatGame");
            let (lambda, u, constant) = mean_and_blackwell_f64(g, fg, pair, tolerance);
            let residual = ergodic_residual_f64(g, fg, lambda[0], &u);
            let to_rat = |x: f64| {
                rat_from_f64(x).ok_or_else(|| {
                    CoreError::Domain("float-mode value is not finite".to_string())
                })
            };
            Ok(HaltCheck {
                lambda: to_rat(lambda[0])?,
                u: u.into_iter().map(to_rat).collect::<Result<_, _>>()?,
                nonconstant: !constant,
                solves: residual <= tolerance,
            })
        }
    }
}

/// Solves the mean-payoff game: repeat gamma <- (1+gamma)/2, run policy
/// iteration at gamma, and stop once the value and Blackwell bias of the
/// pair solve the two-player ergodic equation.
pub fn solve_mpg(g: &Game, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    let fg = match config.mode {
        ArithmeticMode::Exact => None,
        ArithmeticMode::Float { .. } => Some(FloatGame::new(g)),
    };
    let mut trace = SolverTrace::new(!config.mode.is_exact());
    let mut pair = initial_pair(g, config);
    let mut gamma = Rat::zero();
    let half = Rat::new(1.into(), 2.into());

    for phase in 1..=config.max_gamma_updates {
        gamma = (Rat::one() + &gamma) * &half;
        let outcome = run_discounted_pi(g, fg.as_ref(), pair, &gamma, config, &mut trace, phase)?;
        pair = outcome.pair.clone();

        let check = halting_check(g, fg.as_ref(), &pair, config.mode)?;
        record_phase(
            &mut trace,
            config,
            phase,
            &gamma,
            None,
            None,
            check.nonconstant,
            &outcome,
        );
        if check.solves {
            trace.halt = Some(HaltReason::ErgodicSolved);
            let certificate = strict_certificate(g, &pair);
            return Ok(SolveResult {
                pair,
                value: GameValue::MeanPayoff {
                    lambda: check.lambda,
                    u: check.u,
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
