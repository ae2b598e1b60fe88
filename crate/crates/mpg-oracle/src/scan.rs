//! Adaptive reconstruction of a two-player value curve in one edge weight.
//! Every sample point is an exhaustive exact solve, so the scan is a
//! ground-truth instrument, not a fast one.

use mpg_core::{cycle_structure, CoreError, FunctionalGraph, Game, Rat};
use num::Zero;

use crate::brute::brute_force_solve;
use crate::curve::{BreakpointCurve, Piece};
use crate::error::OracleError;

#[derive(Debug, Clone, PartialEq)]
struct Line {
    slope: Rat,
    intercept: Rat,
    cycle: Vec<usize>,
}

impl Line {
    fn at(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    fn same_graph(&self, other: &Line) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }
}

enum Stop {
    Budget,
    Oracle(OracleError),
}

struct Scan<'a> {
    g: &'a Game,
    edge_idx: usize,
    edge: (usize, usize),
    budget: u64,
    pieces: Vec<(Rat, Rat, Line)>,
}

impl Scan<'_> {
    /// Solves the game with the free edge set to x and reads off the local
    /// line from a witness cycle of an optimal pair. Every cycle induced by
    /// an optimal pair has mean λ(x), so any of them identifies the line.
    fn line_at(&mut self, x: &Rat) -> Result<Line, Stop> {
        if self.budget == 0 {
            return Err(Stop::Budget);
        }
        self.budget -= 1;
        let gx = self.g.with_edge_weight(self.edge_idx, x.clone());
        let report = brute_force_solve(&gx).map_err(Stop::Oracle)?;
        let lambda = report.lambda[0].clone();
        if report.lambda.iter().any(|l| l != &lambda) {
            return Err(Stop::Oracle(
                CoreError::Domain(format!(
                    "value is not constant across vertices at x = {x}; the scan needs ergodic samples"
                ))
                .into(),
            ));
        }
        let pair = &report.optimal_pairs[0];
        let dec = cycle_structure(&FunctionalGraph::from_policies(&gx, pair));
        let cycle = dec.cycles[0].clone();
        let on_cycle = (0..cycle.len())
            .any(|k| (cycle[k], cycle[(k + 1) % cycle.len()]) == self.edge);
        let slope = if on_cycle {
            Rat::from_integer(1.into()) / Rat::from_integer((cycle.len() as i64).into())
        } else {
            Rat::zero()
        };
        let intercept = lambda - &slope * x;
        Ok(Line {
            slope,
            intercept,
            cycle,
        })
    }

    /// Covers [a, b] with certified pieces, left to right. `la` and `lb`
    /// are the lines observed at the endpoints. A piece is only emitted
    /// for a line that interpolates the solved values at both endpoints
    /// and survives a midpoint solve.
    fn cover(&mut self, a: &Rat, la: &Line, b: &Rat, lb: &Line) -> Result<(), Stop> {
        let mid = (a + b) / Rat::from_integer(2.into());
        let candidate = if la.at(b) == lb.at(b) {
            Some(la)
        } else if lb.at(a) == la.at(a) {
            Some(lb)
        } else {
            None
        };
        if let Some(cand) = candidate {
            let lm = self.line_at(&mid)?;
            if lm.at(&mid) == cand.at(&mid) {
                self.pieces.push((a.clone(), b.clone(), cand.clone()));
                return Ok(());
            }
            self.cover(a, la, &mid, &lm)?;
            return self.cover(&mid, &lm, b, lb);
        }
        if la.slope != lb.slope {
            let cross = (&lb.intercept - &la.intercept) / (&la.slope - &lb.slope);
            if &cross > a && &cross < b {
                let lc = self.line_at(&cross)?;
                if lc.at(&cross) == la.at(&cross) {
                    // The endpoint lines meet on the curve; certify both sides.
                    self.cover(a, la, &cross, la)?;
                    return self.cover(&cross, lb, b, lb);
                }
                self.cover(a, la, &cross, &lc)?;
                return self.cover(&cross, &lc, b, lb);
            }
        }
        let lm = self.line_at(&mid)?;
        self.cover(a, la, &mid, &lm)?;
        self.cover(&mid, &lm, b, lb)
    }

    fn assemble(self, complete: bool) -> BreakpointCurve {
        let mut merged: Vec<(Rat, Rat, Line)> = Vec::new();
        for (left, right, line) in self.pieces {
            match merged.last_mut() {
                Some((_, prev_right, prev_line))
                    if *prev_right == left && prev_line.same_graph(&line) =>
                {
                    *prev_right = right;
                }
                _ => merged.push((left, right, line)),
            }
        }
        let breakpoints = merged
            .windows(2)
            .filter(|w| w[0].1 == w[1].0)
            .map(|w| w[0].1.clone())
            .collect();
        let pieces = merged
            .into_iter()
            .map(|(left, right, line)| Piece {
                x_left: Some(left),
                x_right: Some(right),
                slope: line.slope,
                intercept: line.intercept,
                witness_cycle: line.cycle,
            })
            .collect();
        BreakpointCurve {
            pieces,
            breakpoints,
            complete,
        }
    }
}

/// Reconstructs x ↦ λ(x) over `x_range` for the weight x of `edge`, using
/// at most `budget` exact solves. Pieces are certified by solving at their
/// midpoint; breakpoints are exact line intersections. On budget
/// exhaustion the partial curve comes back inside the error.
pub fn two_player_breakpoint_scan(
    g: &Game,
    edge: (usize, usize),
    x_range: (Rat, Rat),
    budget: u64,
) -> Result<BreakpointCurve, OracleError> {
    let edge_idx = g.edge_index(edge.0, edge.1).ok_or_else(|| {
        CoreError::Domain(format!("edge ({}, {}) is not in the game", edge.0, edge.1))
    })?;
    let (a, b) = x_range;
    if a >= b {
        return Err(CoreError::Domain("x range must have positive width".into()).into());
    }
    let mut scan = Scan {
        g,
        edge_idx,
        edge,
        budget,
        pieces: Vec::new(),
    };
    let run = (|| {
        let la = scan.line_at(&a)?;
        let lb = scan.line_at(&b)?;
        scan.cover(&a, &la, &b, &lb)
    })();
    match run {
        Ok(()) => Ok(scan.assemble(true)),
        Err(Stop::Budget) => Err(OracleError::BudgetExhausted {
            partial: Box::new(scan.assemble(false)),
        }),
        Err(Stop::Oracle(e)) => Err(e),
    }
}
