//! Exhaustive policy-pair evaluation: saddle values over all positional
//! pairs, optimal and bias-induced pair sets, and the discounted
//! counterparts. Everything here is exact and independent of the
//! policy-iteration engine, so it can serve as ground truth for it.

use mpg_core::{
    cone_membership, discounted_value_zero_player, mean_value_and_bias, CoreError, Game, Player,
    PolicyPair, Rat,
};
use num::{BigInt, One, Zero};

use crate::error::OracleError;

const PAIR_BUDGET: u128 = 1_000_000;

/// Saddle-point summary of an exhaustive mean-payoff evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceReport {
    /// Per-vertex game value, computed as max over sigma of min over tau
    /// and asserted equal to the min-max.
    pub lambda: Vec<Rat>,
    /// All pairs (sigma, tau) where sigma guarantees lambda against every
    /// tau and tau guarantees it against every sigma.
    pub optimal_pairs: Vec<PolicyPair>,
    /// Pairs with a single induced cycle whose weight vector lies weakly
    /// inside the pair's cone.
    pub bias_induced_pairs: Vec<PolicyPair>,
    /// Every enumerated pair with its per-vertex payoff vector.
    pub payoff_table: Vec<(PolicyPair, Vec<Rat>)>,
}

/// Exhaustive discounted evaluation at a fixed discount factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountedReport {
    pub gamma: Rat,
    pub value: Vec<Rat>,
    /// Pairs whose every choice attains the one-step optimum against the
    /// value vector.
    pub optimal_pairs: Vec<PolicyPair>,
}

fn check_pair_budget(g: &Game) -> Result<(), OracleError> {
    let mut count: u128 = 1;
    for v in 0..g.n() {
        count = count.saturating_mul(g.out_edges(v).len() as u128);
        if count > PAIR_BUDGET {
            return Err(CoreError::TooLarge {
                what: "policy pairs",
                value: count,
                limit: PAIR_BUDGET,
            }
            .into());
        }
    }
    Ok(())
}

/// Vertices owned by `player` together with every assignment of successors
/// to them, in odometer order over the sorted out-edge lists.
fn assignments(g: &Game, player: Player) -> (Vec<usize>, Vec<Vec<usize>>) {
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| g.owner(v) == player).collect();
    let choices: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| g.out_edges(v).iter().map(|&e| g.edge(e).to).collect())
        .collect();
    let mut all = Vec::new();
    let mut idx = vec![0usize; vertices.len()];
    loop {
        all.push(
            idx.iter()
                .enumerate()
                .map(|(k, &i)| choices[k][i])
                .collect(),
        );
        let mut k = vertices.len();
        loop {
            if k == 0 {
                return (vertices, all);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn compose(
    base: &PolicyPair,
    max_vs: &[usize],
    sigma: &[usize],
    min_vs: &[usize],
    tau: &[usize],
) -> PolicyPair {
    let mut pair = base.clone();
    for (k, &v) in max_vs.iter().enumerate() {
        pair.set_successor(v, sigma[k]);
    }
    for (k, &v) in min_vs.iter().enumerate() {
        pair.set_successor(v, tau[k]);
    }
    pair
}

fn pointwise_min(acc: &mut Option<Vec<Rat>>, v: &[Rat]) {
    match acc {
        None => *acc = Some(v.to_vec()),
        Some(a) => {
            for (ai, vi) in a.iter_mut().zip(v) {
                if vi < ai {
                    *ai = vi.clone();
                }
            }
        }
    }
}

fn pointwise_max(acc: &mut Option<Vec<Rat>>, v: &[Rat]) {
    match acc {
        None => *acc = Some(v.to_vec()),
        Some(a) => {
            for (ai, vi) in a.iter_mut().zip(v) {
                if vi > ai {
                    *ai = vi.clone();
                }
            }
        }
    }
}

/// Evaluates every positional pair of the mean-payoff game and reports the
/// saddle value, the optimal pairs, and the bias-induced pairs. The
/// per-vertex max-min is asserted equal to the min-max.
pub fn brute_force_solve(g: &Game) -> Result<BruteForceReport, OracleError> {
    check_pair_budget(g)?;
    let base = PolicyPair::lowest_index(g);
    let (max_vs, sigmas) = assignments(g, Player::Max);
    let (min_vs, taus) = assignments(g, Player::Min);

    let mut payoff_table = Vec::with_capacity(sigmas.len() * taus.len());
    let mut low: Vec<Option<Vec<Rat>>> = vec![None; sigmas.len()];
    let mut high: Vec<Option<Vec<Rat>>> = vec![None; taus.len()];
    for (si, sigma) in sigmas.iter().enumerate() {
        for (ti, tau) in taus.iter().enumerate() {
            let pair = compose(&base, &max_vs, sigma, &min_vs, tau);
            let payoff = mean_value_and_bias(g, &pair).lambda;
            pointwise_min(&mut low[si], &payoff);
            pointwise_max(&mut high[ti], &payoff);
            payoff_table.push((pair, payoff));
        }
    }

    let mut lambda: Option<Vec<Rat>> = None;
    for row in &low {
        pointwise_max(&mut lambda, row.as_ref().unwrap());
    }
    let lambda = lambda.unwrap();
    let mut minmax: Option<Vec<Rat>> = None;
    for col in &high {
        pointwise_min(&mut minmax, col.as_ref().unwrap());
    }
    assert_eq!(
        lambda,
        minmax.unwrap(),
        "max-min and min-max must agree at every vertex"
    );

    let good_sigmas: Vec<usize> = (0..sigmas.len())
        .filter(|&si| low[si].as_ref().unwrap() == &lambda)
        .collect();
    let good_taus: Vec<usize> = (0..taus.len())
        .filter(|&ti| high[ti].as_ref().unwrap() == &lambda)
        .collect();
    let mut optimal_pairs = Vec::with_capacity(good_sigmas.len() * good_taus.len());
    for &si in &good_sigmas {
        for &ti in &good_taus {
            optimal_pairs.push(compose(&base, &max_vs, &sigmas[si], &min_vs, &taus[ti]));
        }
    }

    let mut bias_induced_pairs = Vec::new();
    for (pair, _) in &payoff_table {
        match cone_membership(g, pair) {
            Ok(cert) => {
                if cert.inside_weak {
                    bias_induced_pairs.push(pair.clone());
                }
            }
            Err(CoreError::NotSingleCycle) => {}
            Err(e) => return Err(e.into()),
        }
    }

    Ok(BruteForceReport {
        lambda,
        optimal_pairs,
        bias_induced_pairs,
        payoff_table,
    })
}

/// Evaluates every positional pair of the discounted game at `gamma` and
/// reports the saddle value together with the pairs that satisfy the
/// one-step optimality equations.
pub fn brute_force_discounted(g: &Game, gamma: &Rat) -> Result<DiscountedReport, OracleError> {
    if gamma <= &Rat::zero() || gamma >= &Rat::one() {
        return Err(CoreError::BadDiscount(gamma.clone()).into());
    }
    check_pair_budget(g)?;
    let base = PolicyPair::lowest_index(g);
    let (max_vs, sigmas) = assignments(g, Player::Max);
    let (min_vs, taus) = assignments(g, Player::Min);

    let mut low: Vec<Option<Vec<Rat>>> = vec![None; sigmas.len()];
    let mut high: Vec<Option<Vec<Rat>>> = vec![None; taus.len()];
    for (si, sigma) in sigmas.iter().enumerate() {
        for (ti, tau) in taus.iter().enumerate() {
            let pair = compose(&base, &max_vs, sigma, &min_vs, tau);
            let value = discounted_value_zero_player(g, &pair, gamma)
                .map_err(OracleError::from)?
                .value;
            pointwise_min(&mut low[si], &value);
            pointwise_max(&mut high[ti], &value);
        }
    }

    let mut value: Option<Vec<Rat>> = None;
    for row in &low {
        pointwise_max(&mut value, row.as_ref().unwrap());
    }
    let value = value.unwrap();
    let mut minmax: Option<Vec<Rat>> = None;
    for col in &high {
        pointwise_min(&mut minmax, col.as_ref().unwrap());
    }
    assert_eq!(
        value,
        minmax.unwrap(),
        "max-min and min-max must agree at every vertex"
    );

    // One-step optimal successor sets against the value vector; a pair is
    // optimal exactly when each vertex picks from its set.
    let one_minus = Rat::one() - gamma;
    let best_successors: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            let scores: Vec<(usize, Rat)> = g
                .out_edges(v)
                .iter()
                .map(|&e| {
                    let edge = g.edge(e);
                    (edge.to, &one_minus * &edge.weight + gamma * &value[edge.to])
                })
                .collect();
            let best = match g.owner(v) {
                Player::Max => scores.iter().map(|(_, s)| s).max().unwrap().clone(),
                Player::Min => scores.iter().map(|(_, s)| s).min().unwrap().clone(),
            };
            scores
                .into_iter()
                .filter(|(_, s)| *s == best)
                .map(|(to, _)| to)
                .collect()
        })
        .collect();

    let mut optimal_pairs = Vec::new();
    let mut idx = vec![0usize; g.n()];
    loop {
        let succ: Vec<usize> = idx
            .iter()
            .enumerate()
            .map(|(v, &i)| best_successors[v][i])
            .collect();
        optimal_pairs.push(PolicyPair::from_successors(succ));
        let mut v = g.n();
        let mut done = false;
        loop {
            if v == 0 {
                done = true;
                break;
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < best_successors[v].len() {
                break;
            }
            idx[v] = 0;
        }
        if done {
            break;
        }
    }

    Ok(DiscountedReport {
        gamma: gamma.clone(),
        value,
        optimal_pairs,
    })
}

/// Runs the discounted brute force on the grid 1 - 2^{-s} for s = 1..=t and
/// returns the first grid point from which the optimal-pair set stays
/// constant through the rest of the grid. An estimate, not a certificate.
pub fn blackwell_threshold_estimate(g: &Game, t: u32) -> Result<Rat, OracleError> {
    if t == 0 {
        return Err(CoreError::Domain("grid resolution must be at least 1".into()).into());
    }
    let mut sets = Vec::with_capacity(t as usize);
    for s in 1..=t {
        let gamma = Rat::one() - Rat::new(BigInt::one(), BigInt::one() << s);
        sets.push(brute_force_discounted(g, &gamma)?.optimal_pairs);
    }
    let last = sets.last().unwrap().clone();
    let mut first = t;
    for s in (1..=t).rev() {
        if sets[(s - 1) as usize] == last {
            first = s;
        } else {
            break;
        }
    }
    Ok(Rat::one() - Rat::new(BigInt::one(), BigInt::one() << first))
}
