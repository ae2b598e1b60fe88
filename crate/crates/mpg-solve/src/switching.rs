//! Greedy all-switches passes: evaluate the fixed pair, then reassign every
//! vertex of one player whose fixed-point equation fails to an edge
//! attaining the max (resp. min), lowest target index on ties.

use mpg_core::{discounted_value_zero_player, CoreError, Game, Player, PolicyPair, Rat};
use num::One;

use crate::config::ArithmeticMode;
use crate::float_eval::{discounted_values_f64, FloatGame};

/// Discounted values of the current pair, in the configured arithmetic.
pub(crate) enum Values {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

pub(crate) fn eval_values(
    g: &Game,
    fg: Option<&FloatGame>,
    pair: &PolicyPair,
    gamma: &Rat,
    mode: ArithmeticMode,
) -> Result<Values, CoreError> {
    match mode {
        ArithmeticMode::Exact => Ok(Values::Exact(
            discounted_value_zero_player(g, pair, gamma)?.value,
        )),
        ArithmeticMode::Float { .. } => {
            if gamma <= &Rat::from_integer(0.into()) || gamma >= &Rat::one() {
                return Err(CoreError::BadDiscount(gamma.clone()));
            }
            let fg = fg.expect("float mode carries a FloatGame");
            Ok(Values::Float(discounted_values_f64(
                g,
                fg,
                pair,
                mpg_core::rat::rat_to_f64(gamma),
            )))
        }
    }
}

fn switch_pass_exact(
    g: &Game,
    pair: &PolicyPair,
    gamma: &Rat,
    player: Player,
    values: &[Rat],
) -> (PolicyPair, Vec<(usize, usize)>) {
    let one_minus = Rat::one() - gamma;
    let mut next = pair.clone();
    let mut moves = Vec::new();
    for v in 0..g.n() {
        if g.owner(v) != player {
            continue;
        }
        let mut best: Option<(Rat, usize)> = None;
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            let cand = &one_minus * &edge.weight + gamma * &values[edge.to];
            let better = match &best {
                None => true,
                Some((b, _)) => match player {
                    Player::Max => &cand > b,
                    Player::Min => &cand < b,
                },
            };
            if better {
                best = Some((cand, edge.to));
            }
        }
        let (best_val, k) = best.expect("every vertex has an out-edge");
        if best_val != values[v] {
            debug_assert_ne!(pair.successor(v), k);
            next.set_successor(v, k);
            moves.push((v, k));
        }
    }
    (next, moves)
}

fn switch_pass_float(
    g: &Game,
    fg: &FloatGame,
    pair: &PolicyPair,
    gamma: f64,
    player: Player,
    tolerance: f64,
    values: &[f64],
) -> (PolicyPair, Vec<(usize, usize)>) {
    let one_minus = 1.0 - gamma;
    let mut next = pair.clone();
    let mut moves = Vec::new();
    for v in 0..g.n() {
        if g.owner(v) != player {
            continue;
        }
        let mut best = f64::NAN;
        let mut k = usize::MAX;
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            let cand = one_minus * fg.weights[e] + gamma * values[edge.to];
            let better = k == usize::MAX
                || match player {
                    Player::Max => cand > best,
                    Player::Min => cand < best,
                };
            if better {
                best = cand;
                k = edge.to;
            }
        }
        if (best - values[v]).abs() > tolerance && k != pair.successor(v) {
            next.set_successor(v, k);
            moves.push((v, k));
        }
    }
    (next, moves)
}

pub(crate) fn switch_pass(
    g: &Game,
    fg: Option<&FloatGame>,
    pair: &PolicyPair,
    gamma: &Rat,
    player: Player,
    mode: ArithmeticMode,
    values: &Values,
) -> (PolicyPair, Vec<(usize, usize)>) {
    match (mode, values) {
        (ArithmeticMode::Exact, Values::Exact(v)) => {
            switch_pass_exact(g, pair, gamma, player, v)
        }
        (ArithmeticMode::Float { tolerance }, Values::Float(v)) => switch_pass_float(
            g,
            fg.expect("float mode carries a FloatGame"),
            pair,
            mpg_core::rat::rat_to_f64(gamma),
            player,
            tolerance,
            v,
        ),
        _ => unreachable!("arithmetic mode and value vector kind always match"),
    }
}

/// One greedy all-switches pass for `player` at discount `gamma`, exact
/// arithmetic. Vertices of the other player keep their successors.
pub fn switch_player(
    g: &Game,
    pair: &PolicyPair,
    gamma: &Rat,
    player: Player,
) -> Result<PolicyPair, CoreError> {
    assert!(pair.is_valid(g), "policy pair must be legal for the game");
    let values = discounted_value_zero_player(g, pair, gamma)?.value;
    Ok(switch_pass_exact(g, pair, gamma, player, &values).0)
}
