//! Exact evaluation of zero-player games: graphs where every vertex has a
//! single fixed successor. Provides the cycle decomposition, mean value and
//! bias, the Blackwell bias, and closed-form discounted values.

use num::{One, Signed, Zero};

use crate::error::CoreError;
use crate::game::{Game, PolicyPair};
use crate::rat::Rat;

/// A functional graph: one successor per vertex, with the weight of each
/// chosen edge carried along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalGraph {
    succ: Vec<usize>,
    weight: Vec<Rat>,
}

impl FunctionalGraph {
    pub fn new(succ: Vec<usize>, weight: Vec<Rat>) -> FunctionalGraph {
        assert_eq!(succ.len(), weight.len(), "one weight per vertex");
        let n = succ.len();
        assert!(succ.iter().all(|&s| s < n), "successor out of range");
        FunctionalGraph { succ, weight }
    }

    /// Subgraph induced by fixing both policies in `g`.
    pub fn from_policies(g: &Game, pair: &PolicyPair) -> FunctionalGraph {
        assert!(pair.is_valid(g), "policy pair must be legal for the game");
        let succ: Vec<usize> = (0..g.n()).map(|v| pair.successor(v)).collect();
        let weight = (0..g.n())
            .map(|v| g.weight(pair.edge_at(g, v)).clone())
            .collect();
        FunctionalGraph { succ, weight }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn successor(&self, v: usize) -> usize {
        self.succ[v]
    }

    /// Weight of the edge leaving `v`.
    pub fn weight(&self, v: usize) -> &Rat {
        &self.weight[v]
    }
}

/// Cycle structure of a functional graph. Every vertex reaches exactly one
/// cycle; `cycles` lists each one starting from its minimal vertex and
/// following successor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    /// Index into `cycles` per vertex.
    pub cycle_of: Vec<usize>,
    /// Distance to the first on-cycle vertex; 0 for cycle vertices.
    pub entry_len: Vec<usize>,
    pub single_cycle: bool,
}

impl CycleDecomposition {
    pub fn on_cycle(&self, v: usize) -> bool {
        self.entry_len[v] == 0
    }
}

/// Computes the cycle decomposition by successor walks with visitation
/// stamps; linear in the number of vertices.
pub fn cycle_structure(f: &FunctionalGraph) -> CycleDecomposition {
    let n = f.n();
    const UNSEEN: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![UNSEEN; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut cycle_of = vec![usize::MAX; n];
    let mut entry_len = vec![0usize; n];

    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == UNSEEN {
            state[cur] = ACTIVE;
            path.push(cur);
            cur = f.successor(cur);
        }
        let mut tail_end = path.len();
        if state[cur] == ACTIVE {
            // `cur` closes a new cycle; the suffix of `path` from `cur` is it.
            let pos = path.iter().position(|&v| v == cur).expect("on path");
            let mut cycle: Vec<usize> = path[pos..].to_vec();
            let min_pos = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, &v)| v)
                .map(|(i, _)| i)
                .expect("cycle nonempty");
            cycle.rotate_left(min_pos);
            let id = cycles.len();
            for &v in &cycle {
                state[v] = DONE;
                cycle_of[v] = id;
                entry_len[v] = 0;
            }
            cycles.push(cycle);
            tail_end = pos;
        }
        for &v in path[..tail_end].iter().rev() {
            let s = f.successor(v);
            state[v] = DONE;
            cycle_of[v] = cycle_of[s];
            entry_len[v] = entry_len[s] + 1;
        }
    }

    let single_cycle = cycles.len() == 1;
    CycleDecomposition {
        cycles,
        cycle_of,
        entry_len,
        single_cycle,
    }
}

/// Mean value and bias of a zero-player game. `lambda` and `u` are
/// per-vertex; `norm_vertices` lists the anchor of each cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanBiasSolution {
    pub lambda: Vec<Rat>,
    pub u: Vec<Rat>,
    /// Minimal-index vertex of each cycle, aligned with the decomposition.
    pub norm_vertices: Vec<usize>,
    /// True when `lambda` is the same at every vertex.
    pub constant_value: bool,
    pub single_cycle: bool,
    /// True when `u` is the Blackwell bias (absolute, no zero anchor);
    /// false when `u` is normalized to 0 at each cycle anchor.
    pub blackwell: bool,
}

impl MeanBiasSolution {
    /// The common value, when it is constant.
    pub fn lambda_scalar(&self) -> Option<&Rat> {
        if self.constant_value {
            self.lambda.first()
        } else {
            None
        }
    }
}

fn vertices_by_entry_len(dec: &CycleDecomposition) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dec.entry_len.len()).collect();
    order.sort_by_key(|&v| dec.entry_len[v]);
    order
}

fn cycle_means(f: &FunctionalGraph, dec: &CycleDecomposition) -> Vec<Rat> {
    dec.cycles
        .iter()
        .map(|cycle| {
            let total: Rat = cycle.iter().map(|&v| f.weight(v).clone()).sum();
            total / Rat::from_integer((cycle.len() as i64).into())
        })
        .collect()
}

fn solve_bias(f: &FunctionalGraph, dec: &CycleDecomposition, anchor_values: &[Rat]) -> Vec<Rat> {
    let n = f.n();
    let mut u = vec![Rat::zero(); n];
    let means = cycle_means(f, dec);
    for (c, cycle) in dec.cycles.iter().enumerate() {
        let lambda = &means[c];
        u[cycle[0]] = anchor_values[c].clone();
        // u_i = (r_i - lambda) + u_{f(i)}, walked forward around the cycle.
        for w in cycle.windows(2) {
            u[w[1]] = &u[w[0]] - (f.weight(w[0]) - lambda);
        }
    }
    for v in vertices_by_entry_len(dec) {
        if dec.entry_len[v] == 0 {
            continue;
        }
        let s = f.successor(v);
        let lambda = &means[dec.cycle_of[v]];
        u[v] = (f.weight(v) - lambda) + &u[s];
    }
    u
}

/// Computes `mean_value_and_bias` on a bare functional graph.
pub fn mean_value_and_bias_fg(f: &FunctionalGraph) -> MeanBiasSolution {
    let dec = cycle_structure(f);
    let means = cycle_means(f, &dec);
    let lambda: Vec<Rat> = (0..f.n()).map(|v| means[dec.cycle_of[v]].clone()).collect();
    let anchors: Vec<Rat> = vec![Rat::zero(); dec.cycles.len()];
    let u = solve_bias(f, &dec, &anchors);
    let constant_value = lambda.windows(2).all(|w| w[0] == w[1]);
    MeanBiasSolution {
        lambda,
        u,
        norm_vertices: dec.cycles.iter().map(|c| c[0]).collect(),
        constant_value,
        single_cycle: dec.single_cycle,
        blackwell: false,
    }
}

/// Per-vertex mean value and the bias normalized to 0 at each cycle's
/// minimal-index vertex. With several cycles the normalization is
/// per-component and the solution is flagged accordingly.
pub fn mean_value_and_bias(g: &Game, pair: &PolicyPair) -> MeanBiasSolution {
    mean_value_and_bias_fg(&FunctionalGraph::from_policies(g, pair))
}

/// Computes `blackwell_bias_zero_player` on a bare functional graph.
pub fn blackwell_bias_fg(f: &FunctionalGraph) -> MeanBiasSolution {
    let dec = cycle_structure(f);
    let means = cycle_means(f, &dec);
    let lambda: Vec<Rat> = (0..f.n()).map(|v| means[dec.cycle_of[v]].clone()).collect();
    // Closed form at each cycle anchor i0, derived from the series expansion
    // of the cycle's discounted value around gamma = 1:
    //   u*_{i0} = (1/l) * sum_{k=0}^{l-1} k * (lambda - w_k),
    // where w_k walks the cycle's weights starting at i0. Validated against
    // the numeric limit (lambda^(gamma) - lambda) / (1 - gamma) in tests.
    let anchors: Vec<Rat> = dec
        .cycles
        .iter()
        .enumerate()
        .map(|(c, cycle)| {
            let lambda = &means[c];
            let l = cycle.len() as i64;
            let mut total = Rat::zero();
            for (k, &v) in cycle.iter().enumerate() {
                total += Rat::from_integer((k as i64).into()) * (lambda - f.weight(v));
            }
            total / Rat::from_integer(l.into())
        })
        .collect();
    let u = solve_bias(f, &dec, &anchors);
    let constant_value = lambda.windows(2).all(|w| w[0] == w[1]);
    MeanBiasSolution {
        lambda,
        u,
        norm_vertices: dec.cycles.iter().map(|c| c[0]).collect(),
        constant_value,
        single_cycle: dec.single_cycle,
        blackwell: true,
    }
}

/// Value and Blackwell bias of the zero-player game: the exact limit
/// u* = lim_{gamma -> 1} (lambda^(gamma) - lambda) / (1 - gamma), absolute
/// per component (no free constant).
pub fn blackwell_bias_zero_player(g: &Game, pair: &PolicyPair) -> MeanBiasSolution {
    blackwell_bias_fg(&FunctionalGraph::from_policies(g, pair))
}

/// Discounted values of a zero-player game for a fixed discount factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscountedValueVector {
    pub gamma: Rat,
    pub value: Vec<Rat>,
}

/// Computes `discounted_value_zero_player` on a bare functional graph.
pub fn discounted_value_fg(
    f: &FunctionalGraph,
    gamma: &Rat,
) -> Result<DiscountedValueVector, CoreError> {
    if gamma <= &Rat::zero() || gamma >= &Rat::one() {
        return Err(CoreError::BadDiscount(gamma.clone()));
    }
    let dec = cycle_structure(f);
    let one_minus = Rat::one() - gamma;
    let mut value = vec![Rat::zero(); f.n()];
    for cycle in &dec.cycles {
        // Anchor: v = (1 - gamma) * (sum_k gamma^k w_k) / (1 - gamma^l).
        let mut pow = Rat::one();
        let mut series = Rat::zero();
        for &v in cycle.iter() {
            series += &pow * f.weight(v);
            pow *= gamma;
        }
        // After the loop, pow = gamma^l.
        value[cycle[0]] = &one_minus * series / (Rat::one() - pow);
        // Forward along the cycle: v_next = (v_cur - (1-gamma) w_cur) / gamma.
        for w in cycle.windows(2) {
            value[w[1]] = (&value[w[0]] - &one_minus * f.weight(w[0])) / gamma;
        }
    }
    for v in vertices_by_entry_len(&dec) {
        if dec.entry_len[v] == 0 {
            continue;
        }
        let s = f.successor(v);
        value[v] = &one_minus * f.weight(v) + gamma * &value[s];
    }
    Ok(DiscountedValueVector {
        gamma: gamma.clone(),
        value,
    })
}

/// Exact discounted values under fixed policies, via the cycle closed form.
/// The fixed-point residual of the result is exactly zero.
pub fn discounted_value_zero_player(
    g: &Game,
    pair: &PolicyPair,
    gamma: &Rat,
) -> Result<DiscountedValueVector, CoreError> {
    discounted_value_fg(&FunctionalGraph::from_policies(g, pair), gamma)
}

/// Max absolute residual of v_i = (1-gamma) w_i + gamma v_{f(i)} over all
/// vertices; exact.
pub fn discounted_residual(f: &FunctionalGraph, dvv: &DiscountedValueVector) -> Rat {
    let one_minus = Rat::one() - &dvv.gamma;
    (0..f.n())
        .map(|v| {
            let rhs = &one_minus * f.weight(v) + &dvv.gamma * &dvv.value[f.successor(v)];
            (&dvv.value[v] - rhs).abs()
        })
        .max()
        .unwrap_or_else(Rat::zero)
}
