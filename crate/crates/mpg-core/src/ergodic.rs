//! Ergodic equation checking, polyhedral cone certificates for unique
//! bias-induced policy pairs, the condition number, edge stability
//! thresholds, theory-bound formulas, and a brute-force ergodicity test.

use num::{One, Signed, Zero};

use crate::error::CoreError;
use crate::game::{Game, Player, PolicyPair};
use crate::rat::{rat_to_f64, Rat};
use crate::zero_player::{cycle_structure, mean_value_and_bias_fg, FunctionalGraph};

/// Candidate solution of the ergodic equation: scalar value, per-vertex bias.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicSolution {
    pub lambda: Rat,
    pub u: Vec<Rat>,
}

/// Residuals of the ergodic equation at a candidate solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub residuals: Vec<Rat>,
    pub max_abs: Rat,
    pub solves: bool,
}

/// Evaluates |lambda + u_i - best_i| at every vertex, where best_i is the
/// max (Max vertex) or min (Min vertex) of r_ij + u_j over outgoing edges.
/// Exact; `solves` holds iff every residual is zero.
pub fn check_ergodic_equation(g: &Game, sol: &ErgodicSolution) -> ResidualReport {
    assert_eq!(sol.u.len(), g.n(), "bias length must equal vertex count");
    let mut residuals = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let candidates = g.out_edges(v).iter().map(|&e| {
            let edge = g.edge(e);
            &edge.weight + &sol.u[edge.to]
        });
        let best = match g.owner(v) {
            Player::Max => candidates.max(),
            Player::Min => candidates.min(),
        }
        .expect("every vertex needs an out-edge");
        residuals.push((&sol.lambda + &sol.u[v] - best).abs());
    }
    let max_abs = residuals.iter().cloned().max().unwrap_or_else(Rat::zero);
    let solves = max_abs.is_zero();
    ResidualReport {
        residuals,
        max_abs,
        solves,
    }
}

/// Certificate of (strict or weak) membership of the weight vector in the
/// polyhedral cone of a policy pair with a single induced cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeCertificate {
    pub pair: PolicyPair,
    pub inside_strict: bool,
    pub inside_weak: bool,
    /// Minimal signed slack over non-policy edges; `None` when the pair uses
    /// every edge (membership is then vacuous).
    pub margin: Option<Rat>,
    /// Edge attaining the margin.
    pub witness_edge: Option<usize>,
    pub lambda: Rat,
    pub u: Vec<Rat>,
}

/// Signed slack of a non-policy edge (i,j): positive means the strict cone
/// inequality holds. Max side: (lambda + u_i - u_j) - r_ij; Min side:
/// r_ij - (lambda + u_i - u_j).
fn edge_slack(g: &Game, lambda: &Rat, u: &[Rat], e: usize) -> Rat {
    let edge = g.edge(e);
    let z = lambda + &u[edge.from] - &u[edge.to];
    match g.owner(edge.from) {
        Player::Max => z - &edge.weight,
        Player::Min => &edge.weight - z,
    }
}

/// Tests whether the game's weights lie in the cone of `pair`: the region
/// where (lambda, u) of the pair solves the ergodic equation with strict
/// (resp. weak) inequalities on all non-policy edges. Requires the pair to
/// induce a single cycle.
pub fn cone_membership(g: &Game, pair: &PolicyPair) -> Result<ConeCertificate, CoreError> {
    assert!(pair.is_valid(g), "policy pair must be legal for the game");
    let f = FunctionalGraph::from_policies(g, pair);
    let dec = cycle_structure(&f);
    if !dec.single_cycle {
        return Err(CoreError::NotSingleCycle);
    }
    let sol = mean_value_and_bias_fg(&f);
    let lambda = sol.lambda[0].clone();
    let u = sol.u;

    let mut margin: Option<Rat> = None;
    let mut witness_edge = None;
    for e in 0..g.m() {
        let edge = g.edge(e);
        if pair.uses_edge(edge.from, edge.to) {
            continue;
        }
        let slack = edge_slack(g, &lambda, &u, e);
        if margin.as_ref().is_none_or(|m| &slack < m) {
            margin = Some(slack);
            witness_edge = Some(e);
        }
    }

    let inside_strict = margin.as_ref().is_none_or(|m| m > &Rat::zero());
    let inside_weak = margin.as_ref().is_none_or(|m| m >= &Rat::zero());
    Ok(ConeCertificate {
        pair: pair.clone(),
        inside_strict,
        inside_weak,
        margin,
        witness_edge,
        lambda,
        u,
    })
}

/// Condition number report. `delta` is the sentinel 1 for zero-player games;
/// otherwise max |r_ij - lambda| over all edges divided by the minimal
/// nonzero |r_ij - lambda + u_j - u_i|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub delta: Rat,
    pub lambda: Rat,
    pub u: Vec<Rat>,
    pub numerator_edge: Option<usize>,
    pub denominator_edge: Option<usize>,
    pub in_u: bool,
}

/// Computes the condition number. Requires a pair certified strictly inside
/// its cone, or a zero-player game (where the sentinel 1 applies).
pub fn condition_number(g: &Game, pair: &PolicyPair) -> Result<ConditionReport, CoreError> {
    if g.is_zero_player() {
        let f = FunctionalGraph::from_policies(g, pair);
        let sol = mean_value_and_bias_fg(&f);
        return Ok(ConditionReport {
            delta: Rat::one(),
            lambda: sol.lambda[0].clone(),
            u: sol.u,
            numerator_edge: None,
            denominator_edge: None,
            in_u: sol.single_cycle,
        });
    }
    let cert = match cone_membership(g, pair) {
        Ok(cert) => cert,
        Err(CoreError::NotSingleCycle) => return Err(CoreError::NotCertified),
        Err(other) => return Err(other),
    };
    if !cert.inside_strict {
        return Err(CoreError::NotCertified);
    }

    let mut numerator = Rat::zero();
    let mut numerator_edge = 0usize;
    let mut denominator: Option<Rat> = None;
    let mut denominator_edge = None;
    for e in 0..g.m() {
        let edge = g.edge(e);
        let spread = (&edge.weight - &cert.lambda).abs();
        if spread > numerator {
            numerator = spread;
            numerator_edge = e;
        }
        let diff = &edge.weight - &cert.lambda + &cert.u[edge.to] - &cert.u[edge.from];
        if !diff.is_zero() {
            let mag = diff.abs();
            if denominator.as_ref().is_none_or(|d| &mag < d) {
                denominator = Some(mag);
                denominator_edge = Some(e);
            }
        }
    }
    let denominator = denominator
        .expect("a strictly certified non-zero-player game has a nonzero denominator term");
    debug_assert_eq!(Some(&denominator), cert.margin.as_ref());

    Ok(ConditionReport {
        delta: numerator / denominator,
        lambda: cert.lambda,
        u: cert.u,
        numerator_edge: Some(numerator_edge),
        denominator_edge,
        in_u: true,
    })
}

/// Stability threshold Z_ij = lambda + u_i - u_j of an edge not used by a
/// certified pair: moving r_ij strictly on the pair's side of Z_ij keeps the
/// pair the unique bias-induced pair.
pub fn z_threshold(
    g: &Game,
    pair: &PolicyPair,
    from: usize,
    to: usize,
) -> Result<Rat, CoreError> {
    let cert = match cone_membership(g, pair) {
        Ok(cert) => cert,
        Err(CoreError::NotSingleCycle) => return Err(CoreError::NotCertified),
        Err(other) => return Err(other),
    };
    if !cert.inside_strict {
        return Err(CoreError::NotCertified);
    }
    if g.edge_index(from, to).is_none() {
        return Err(CoreError::Domain(format!(
            "edge ({from}, {to}) does not exist"
        )));
    }
    if pair.uses_edge(from, to) {
        return Err(CoreError::EdgeUsedByPolicy { from, to });
    }
    Ok(&cert.lambda + &cert.u[from] - &cert.u[to])
}

/// The tail-bound threshold (8m/eps)(phi + sqrt(2m/eps)), kept in exact
/// form: `coeff` = 8m/eps, `radicand` = 2m/eps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailThreshold {
    pub coeff: Rat,
    pub phi: Rat,
    pub radicand: Rat,
}

impl TailThreshold {
    /// Exact test of delta >= coeff * (phi + sqrt(radicand)).
    pub fn exceeded_by(&self, delta: &Rat) -> bool {
        let lhs = delta / &self.coeff - &self.phi;
        if lhs < Rat::zero() {
            return false;
        }
        &lhs * &lhs >= self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.coeff) * (rat_to_f64(&self.phi) + rat_to_f64(&self.radicand).sqrt())
    }
}

/// Plug-in evaluations of the four bound formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryBounds {
    /// 1 - 1/(6 n^2 delta): discounts above this threshold expose the
    /// certified pair as the unique optimal pair.
    pub blackwell_gamma: Rat,
    /// 1/(4 n (2n+1) m phi): perturbation radius keeping one cone.
    pub robustness_delta: Rat,
    /// (8m/eps)(phi + sqrt(2m/eps)): condition-number tail threshold.
    pub tail_threshold: TailThreshold,
    /// eps/(16 (n+1) m phi): oracle precision sufficient for eps-closeness.
    pub approx_delta: Rat,
}

/// Evaluates the bound formulas. Domain: n, m >= 1, phi > 0, delta >= 1,
/// eps in (0, 1].
pub fn theory_bounds(
    n: usize,
    m: usize,
    phi: &Rat,
    delta_cond: &Rat,
    epsilon: &Rat,
) -> Result<TheoryBounds, CoreError> {
    if n < 1 || m < 1 {
        return Err(CoreError::Domain("need n >= 1 and m >= 1".to_string()));
    }
    if phi <= &Rat::zero() {
        return Err(CoreError::Domain("need phi > 0".to_string()));
    }
    if delta_cond < &Rat::one() {
        return Err(CoreError::Domain("need delta >= 1".to_string()));
    }
    if epsilon <= &Rat::zero() || epsilon > &Rat::one() {
        return Err(CoreError::Domain("need eps in (0, 1]".to_string()));
    }
    let n_rat = Rat::from_integer((n as i64).into());
    let m_rat = Rat::from_integer((m as i64).into());
    let six = Rat::from_integer(6.into());
    let blackwell_gamma = Rat::one() - (&six * &n_rat * &n_rat * delta_cond).recip();
    let four_n = Rat::from_integer(4.into()) * &n_rat;
    let two_n_one = Rat::from_integer(2.into()) * &n_rat + Rat::one();
    let robustness_delta = (four_n * two_n_one * &m_rat * phi).recip();
    let tail_threshold = TailThreshold {
        coeff: Rat::from_integer(8.into()) * &m_rat / epsilon,
        phi: phi.clone(),
        radicand: Rat::from_integer(2.into()) * &m_rat / epsilon,
    };
    let sixteen_n1 = Rat::from_integer(16.into()) * (&n_rat + Rat::one());
    let approx_delta = epsilon / (sixteen_n1 * &m_rat * phi);
    Ok(TheoryBounds {
        blackwell_gamma,
        robustness_delta,
        tail_threshold,
        approx_delta,
    })
}

/// Disjoint dominion pair witnessing non-ergodicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicityWitness {
    pub max_dominion: Vec<usize>,
    pub min_dominion: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    pub witness: Option<ErgodicityWitness>,
}

fn in_mask(mask: u32, v: usize) -> bool {
    mask & (1 << v) != 0
}

/// D is a dominion of `player` when `player`'s vertices in D have an edge
/// into D and the opponent's vertices in D have all their edges inside D.
fn is_dominion(g: &Game, mask: u32, player: Player) -> bool {
    for v in 0..g.n() {
        if !in_mask(mask, v) {
            continue;
        }
        let edges_in = g
            .out_edges(v)
            .iter()
            .filter(|&&e| in_mask(mask, g.edge(e).to))
            .count();
        if g.owner(v) == player {
            if edges_in == 0 {
                return false;
            }
        } else if edges_in != g.out_edges(v).len() {
            return false;
        }
    }
    true
}

/// Largest dominion of `player` inside `allowed`, by greatest-fixpoint
/// deletion: drop `player` vertices with no edge into the current set and
/// opponent vertices with an edge leaving it.
fn greatest_dominion_within(g: &Game, allowed: u32, player: Player) -> u32 {
    let mut set = allowed;
    loop {
        let mut next = set;
        for v in 0..g.n() {
            if !in_mask(set, v) {
                continue;
            }
            let edges_in = g
                .out_edges(v)
                .iter()
                .filter(|&&e| in_mask(set, g.edge(e).to))
                .count();
            let keep = if g.owner(v) == player {
                edges_in > 0
            } else {
                edges_in == g.out_edges(v).len()
            };
            if !keep {
                next &= !(1 << v);
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn mask_vertices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| in_mask(mask, v)).collect()
}

/// Decides ergodicity by subset enumeration: the game is ergodic iff no
/// disjoint nonempty Max-dominion / Min-dominion pair exists. Exponential;
/// gated to n <= 16.
pub fn is_ergodic_bruteforce(g: &Game) -> Result<ErgodicityReport, CoreError> {
    let n = g.n();
    if n > 16 {
        return Err(CoreError::TooLarge {
            what: "n",
            value: n as u128,
            limit: 16,
        });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    for min_mask in 1..=full {
        if !is_dominion(g, min_mask, Player::Min) {
            continue;
        }
        let max_mask = greatest_dominion_within(g, full & !min_mask, Player::Max);
        if max_mask != 0 {
            debug_assert!(is_dominion(g, max_mask, Player::Max));
            return Ok(ErgodicityReport {
                ergodic: false,
                witness: Some(ErgodicityWitness {
                    max_dominion: mask_vertices(max_mask, n),
                    min_dominion: mask_vertices(min_mask, n),
                }),
            });
        }
    }
    Ok(ErgodicityReport {
        ergodic: true,
        witness: None,
    })
}
