//! Karp's minimum mean cycle with an exact witness.

use mpg_core::{Game, Player, Rat};
use num::Zero;

use crate::cycles::cycle_mean;
use crate::error::OracleError;

/// Minimum cycle mean of a one-player graph, with a cycle achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct KarpReport {
    pub lambda: Rat,
    pub cycle: Vec<usize>,
}

fn reaches_all(g: &Game, reversed: bool) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for e in g.edges() {
            let (from, to) = if reversed {
                (e.to, e.from)
            } else {
                (e.from, e.to)
            };
            if from == v && !seen[to] {
                seen[to] = true;
                stack.push(to);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Computes the minimum mean over all cycles by Karp's dynamic program,
/// then recovers a witness cycle from the tight subgraph of the
/// lambda-reduced weights.
pub fn karp_min_mean_cycle(g: &Game) -> Result<KarpReport, OracleError> {
    if (0..g.n()).any(|v| g.owner(v) != Player::Min) {
        return Err(OracleError::NotOnePlayer);
    }
    if !reaches_all(g, false) || !reaches_all(g, true) {
        return Err(OracleError::NotStronglyConnected);
    }
    let n = g.n();

    // d[k][v] = minimum weight of a walk with exactly k edges from 0 to v.
    let mut d: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(Rat::zero());
    for k in 0..n {
        for e in g.edges() {
            if let Some(base) = d[k][e.from].clone() {
                let cand = base + &e.weight;
                let slot = &mut d[k + 1][e.to];
                if slot.as_ref().is_none_or(|cur| &cand < cur) {
                    *slot = Some(cand);
                }
            }
        }
    }

    let mut lambda: Option<Rat> = None;
    for v in 0..n {
        let dn = match &d[n][v] {
            Some(x) => x,
            None => continue,
        };
        let mut worst: Option<Rat> = None;
        for (k, dk) in d.iter().enumerate().take(n) {
            if let Some(dk) = &dk[v] {
                let ratio = (dn - dk) / Rat::from_integer(((n - k) as i64).into());
                if worst.as_ref().is_none_or(|w| &ratio > w) {
                    worst = Some(ratio);
                }
            }
        }
        if let Some(w) = worst {
            if lambda.as_ref().is_none_or(|l| &w < l) {
                lambda = Some(w);
            }
        }
    }
    let lambda = lambda.expect("a graph with out-edges everywhere has a cycle");

    let cycle = witness_cycle(g, &lambda);
    assert_eq!(
        cycle_mean(g, &cycle),
        lambda,
        "witness cycle must achieve the minimum mean"
    );
    Ok(KarpReport { lambda, cycle })
}

/// Finds a cycle whose mean is exactly `lambda`: shortest-path potentials
/// for the reduced weights w - lambda leave every minimum-mean cycle with
/// all-zero reduced costs, so any cycle of the tight subgraph works.
fn witness_cycle(g: &Game, lambda: &Rat) -> Vec<usize> {
    let n = g.n();
    let mut pot: Vec<Option<Rat>> = vec![None; n];
    pot[0] = Some(Rat::zero());
    for _ in 0..n.saturating_sub(1) {
        for e in g.edges() {
            if let Some(base) = pot[e.from].clone() {
                let cand = base + &e.weight - lambda;
                let slot = &mut pot[e.to];
                if slot.as_ref().is_none_or(|cur| &cand < cur) {
                    *slot = Some(cand);
                }
            }
        }
    }
    let pot: Vec<Rat> = pot
        .into_iter()
        .map(|p| p.expect("strong connectivity makes every vertex reachable"))
        .collect();

    let mut tight = vec![Vec::new(); n];
    for e in g.edges() {
        if &(&e.weight - lambda) + &pot[e.from] == pot[e.to] {
            tight[e.from].push(e.to);
        }
    }

    // Depth-first search over tight edges; the first back edge closes a
    // minimum-mean cycle.
    let mut color = vec![0u8; n];
    let mut path = Vec::new();
    for start in 0..n {
        if color[start] == 0 {
            if let Some(cycle) = dfs_cycle(&tight, start, &mut color, &mut path) {
                return cycle;
            }
        }
    }
    unreachable!("the tight subgraph always contains a minimum-mean cycle")
}

fn dfs_cycle(
    tight: &[Vec<usize>],
    v: usize,
    color: &mut [u8],
    path: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    color[v] = 1;
    path.push(v);
    for &w in &tight[v] {
        if color[w] == 1 {
            let pos = path.iter().position(|&p| p == w).unwrap();
            return Some(path[pos..].to_vec());
        }
        if color[w] == 0 {
            if let Some(cycle) = dfs_cycle(tight, w, color, path) {
                return Some(cycle);
            }
        }
    }
    path.pop();
    color[v] = 2;
    None
}
