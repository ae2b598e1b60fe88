//! One-player value curves: the lower envelope of cycle-mean lines in a
//! single free edge weight, and the edge's optimality threshold.

use mpg_core::{CoreError, Game, Player, Rat};
use num::Zero;

use crate::curve::{BreakpointCurve, Piece};
use crate::cycles::enumerate_simple_cycles;
use crate::error::OracleError;

/// Largest x below which every optimal cycle uses the edge. `NegInf` when
/// the edge lies on no cycle, `PosInf` when every cycle uses it.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeThreshold {
    NegInf,
    Finite(Rat),
    PosInf,
}

struct Line {
    slope: Rat,
    intercept: Rat,
    cycle: Vec<usize>,
}

fn cycle_contains_edge(cycle: &[usize], edge: (usize, usize)) -> bool {
    (0..cycle.len()).any(|k| (cycle[k], cycle[(k + 1) % cycle.len()]) == edge)
}

/// Value of the one-player Min game as a function of the weight x of one
/// edge: the minimum over cycles of their mean, where cycles through the
/// edge contribute the line x/len + rest/len and the others are constant.
/// Also reports the threshold above which some optimal cycle avoids the edge.
pub fn one_player_breakpoints(
    g: &Game,
    edge: (usize, usize),
) -> Result<(BreakpointCurve, EdgeThreshold), OracleError> {
    if (0..g.n()).any(|v| g.owner(v) != Player::Min) {
        return Err(OracleError::NotOnePlayer);
    }
    let edge_idx = g
        .edge_index(edge.0, edge.1)
        .ok_or_else(|| CoreError::Domain(format!("edge ({}, {}) is not in the game", edge.0, edge.1)))?;

    let cycles = enumerate_simple_cycles(g)?;
    let mut lines = Vec::new();
    let mut through = Vec::new();
    let mut avoiding_min: Option<Rat> = None;
    for cycle in cycles {
        let len = Rat::from_integer((cycle.len() as i64).into());
        let mut rest = Rat::zero();
        for k in 0..cycle.len() {
            let e = g
                .edge_index(cycle[k], cycle[(k + 1) % cycle.len()])
                .expect("enumerated cycles use graph edges");
            if e != edge_idx {
                rest += g.weight(e);
            }
        }
        if cycle_contains_edge(&cycle, edge) {
            let line = Line {
                slope: Rat::from_integer(1.into()) / &len,
                intercept: rest / &len,
                cycle,
            };
            through.push((line.slope.clone(), line.intercept.clone()));
            lines.push(line);
        } else {
            let mean = rest / &len;
            if avoiding_min.as_ref().is_none_or(|m| &mean < m) {
                avoiding_min = Some(mean.clone());
            }
            lines.push(Line {
                slope: Rat::zero(),
                intercept: mean,
                cycle,
            });
        }
    }
    if lines.is_empty() {
        return Err(CoreError::Domain("graph has no cycle".into()).into());
    }

    let threshold = match (&avoiding_min, through.is_empty()) {
        (_, true) => EdgeThreshold::NegInf,
        (None, false) => EdgeThreshold::PosInf,
        (Some(c), false) => EdgeThreshold::Finite(
            through
                .iter()
                .map(|(a, b)| (c - b) / a)
                .max()
                .expect("through is nonempty"),
        ),
    };

    Ok((lower_envelope(lines), threshold))
}

/// Builds the lower envelope of the lines. Per slope only the lowest line
/// can appear; active slopes then strictly decrease from left to right.
fn lower_envelope(mut lines: Vec<Line>) -> BreakpointCurve {
    lines.sort_by(|a, b| b.slope.cmp(&a.slope).then(a.intercept.cmp(&b.intercept)));
    lines.dedup_by(|next, kept| next.slope == kept.slope);

    // Stack of (line, left endpoint of its active interval).
    let mut stack: Vec<(Line, Option<Rat>)> = Vec::new();
    for line in lines {
        let mut start = None;
        while let Some((top, top_start)) = stack.last() {
            // Intersection with the shallower incoming line; the incoming
            // line wins to the right of it.
            let x = (&line.intercept - &top.intercept) / (&top.slope - &line.slope);
            if top_start.as_ref().is_some_and(|s| &x <= s) {
                stack.pop();
                continue;
            }
            start = Some(x);
            break;
        }
        stack.push((line, start));
    }

    let rights: Vec<Option<Rat>> = stack
        .iter()
        .skip(1)
        .map(|(_, s)| s.clone())
        .chain(std::iter::once(None))
        .collect();
    let breakpoints: Vec<Rat> = stack
        .iter()
        .skip(1)
        .map(|(_, s)| s.clone().expect("inner pieces start at intersections"))
        .collect();
    let pieces = stack
        .into_iter()
        .zip(rights)
        .map(|((line, left), right)| Piece {
            x_left: left,
            x_right: right,
            slope: line.slope,
            intercept: line.intercept,
            witness_cycle: line.cycle,
        })
        .collect();
    BreakpointCurve {
        pieces,
        breakpoints,
        complete: true,
    }
}
