//! f64 mirrors of the zero-player closed forms, for float-mode runs.

use mpg_core::{cycle_structure, rat_to_f64, CycleDecomposition, FunctionalGraph, Game, Player, PolicyPair};

pub(crate) struct FloatGame {
    pub weights: Vec<f64>,
}

impl FloatGame {
    pub fn new(g: &Game) -> FloatGame {
        FloatGame {
            weights: (0..g.m()).map(|e| rat_to_f64(g.weight(e))).collect(),
        }
    }
}

fn decomposition(g: &Game, pair: &PolicyPair) -> (FunctionalGraph, CycleDecomposition) {
    let f = FunctionalGraph::from_policies(g, pair);
    let dec = cycle_structure(&f);
    (f, dec)
}

fn vertices_by_entry_len(dec: &CycleDecomposition) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dec.entry_len.len()).collect();
    order.sort_by_key(|&v| dec.entry_len[v]);
    order
}

fn vertex_weight(g: &Game, fg: &FloatGame, pair: &PolicyPair, v: usize) -> f64 {
    fg.weights[pair.edge_at(g, v)]
}

/// Discounted values of the fixed pair, computed along the cycle structure.
pub(crate) fn discounted_values_f64(
    g: &Game,
    fg: &FloatGame,
    pair: &PolicyPair,
    gamma: f64,
) -> Vec<f64> {
    let (f, dec) = decomposition(g, pair);
    let one_minus = 1.0 - gamma;
    let mut value = vec![0.0f64; g.n()];
    for cycle in &dec.cycles {
        let mut pow = 1.0f64;
        let mut series = 0.0f64;
        for &v in cycle {
            series += pow * vertex_weight(g, fg, pair, v);
            pow *= gamma;
        }
        value[cycle[0]] = one_minus * series / (1.0 - pow);
        for w in cycle.windows(2) {
            value[w[1]] = (value[w[0]] - one_minus * vertex_weight(g, fg, pair, w[0])) / gamma;
        }
    }
    for v in vertices_by_entry_len(&dec) {
        if dec.entry_len[v] == 0 {
            continue;
        }
        value[v] = one_minus * vertex_weight(g, fg, pair, v) + gamma * value[f.successor(v)];
    }
    value
}

/// Mean value and Blackwell bias of the fixed pair. Returns per-vertex
/// lambda, the bias, and whether lambda is constant within tolerance.
pub(crate) fn mean_and_blackwell_f64(
    g: &Game,
    fg: &FloatGame,
    pair: &PolicyPair,
    tolerance: f64,
) -> (Vec<f64>, Vec<f64>, bool) {
    let (f, dec) = decomposition(g, pair);
    let n = g.n();
    let mut lambda = vec![0.0f64; n];
    let mut u = vec![0.0f64; n];
    for cycle in &dec.cycles {
        let l = cycle.len() as f64;
        let mean = cycle
            .iter()
            .map(|&v| vertex_weight(g, fg, pair, v))
            .sum::<f64>()
            / l;
        for &v in cycle {
            lambda[v] = mean;
        }
        let anchor = cycle
            .iter()
            .enumerate()
            .map(|(k, &v)| k as f64 * (mean - vertex_weight(g, fg, pair, v)))
            .sum::<f64>()
            / l;
        u[cycle[0]] = anchor;
        for w in cycle.windows(2) {
            u[w[1]] = u[w[0]] - (vertex_weight(g, fg, pair, w[0]) - mean);
        }
    }
    for v in vertices_by_entry_len(&dec) {
        if dec.entry_len[v] == 0 {
            continue;
        }
        let next = f.successor(v);
        lambda[v] = lambda[next];
        u[v] = (vertex_weight(g, fg, pair, v) - lambda[next]) + u[next];
    }
    let constant = lambda
        .iter()
        .all(|&x| (x - lambda[0]).abs() <= tolerance);
    (lambda, u, constant)
}

/// Max residual of the two-player ergodic equation at (lambda, u).
pub(crate) fn ergodic_residual_f64(g: &Game, fg: &FloatGame, lambda: f64, u: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..g.n() {
        let mut best = f64::NEG_INFINITY;
        let mut init = false;
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            let cand = fg.weights[e] + u[edge.to];
            let better = match g.owner(v) {
                Player::Max => cand > best,
                Player::Min => cand < best,
            };
            if !init || better {
                best = cand;
                init = true;
            }
        }
        let res = (lambda + u[v] - best).abs();
        if res > worst {
            worst = res;
        }
    }
    worst
}
