//! Game model: weighted digraph with per-vertex ownership, policies, and
//! structural validation.

use std::collections::HashMap;

use num::Zero;

use crate::error::{CoreError, Violation};
use crate::rat::Rat;

/// Which player controls a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }
}

/// Directed weighted edge. Weights are exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Rat,
}

/// Per-edge weight assignment, indexed like `Game::edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(pub Vec<Rat>);

impl WeightVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    /// Largest absolute weight; zero for an empty vector.
    pub fn sup_norm(&self) -> Rat {
        self.0
            .iter()
            .map(|w| if w < &Rat::zero() { -w } else { w.clone() })
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = Rat;

    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

/// Two-player game on a directed graph. Immutable after construction;
/// weight changes go through `with_weights` or `scale_shift_weights`,
/// which build a fresh game.
#[derive(Debug, Clone)]
pub struct Game {
    owner: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    by_pair: HashMap<(usize, usize), usize>,
}

impl Game {
    /// Builds a game from an ownership vector and an edge list. Construction
    /// is total: malformed edge lists (out-of-range endpoints, duplicates)
    /// are preserved so `validate_game` can report every defect. Edges with
    /// out-of-range endpoints are excluded from adjacency; duplicate pairs
    /// resolve lookups to their first occurrence.
    pub fn new(owner: Vec<Player>, edges: Vec<Edge>) -> Game {
        let n = owner.len();
        let mut out = vec![Vec::new(); n];
        let mut by_pair = HashMap::new();
        for (idx, e) in edges.iter().enumerate() {
            if e.from < n && e.to < n {
                out[e.from].push(idx);
                by_pair.entry((e.from, e.to)).or_insert(idx);
            }
        }
        for list in &mut out {
            list.sort_by_key(|&e| (edges[e].to, e));
        }
        Game {
            owner,
            edges,
            out,
            by_pair,
        }
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn weight(&self, idx: usize) -> &Rat {
        &self.edges[idx].weight
    }

    /// Index of the edge (from, to), if present.
    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.by_pair.get(&(from, to)).copied()
    }

    /// Outgoing edge indices of `v`, sorted by target vertex.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// True when every vertex has exactly one outgoing edge, i.e. the game
    /// has a single pair of policies.
    pub fn is_zero_player(&self) -> bool {
        self.out.iter().all(|o| o.len() == 1)
    }

    pub fn weights(&self) -> WeightVector {
        WeightVector(self.edges.iter().map(|e| e.weight.clone()).collect())
    }

    /// Same graph with a replacement weight vector.
    pub fn with_weights(&self, w: &WeightVector) -> Game {
        assert_eq!(w.len(), self.m(), "weight vector length mismatch");
        let mut g = self.clone();
        for (e, nw) in g.edges.iter_mut().zip(w.iter()) {
            e.weight = nw.clone();
        }
        g
    }

    /// Same graph with one edge's weight replaced.
    pub fn with_edge_weight(&self, edge: usize, w: Rat) -> Game {
        assert!(edge < self.m(), "edge index out of range");
        let mut g = self.clone();
        g.edges[edge].weight = w;
        g
    }
}

impl PartialEq for Game {
    fn eq(&self, other: &Game) -> bool {
        self.owner == other.owner && self.edges == other.edges
    }
}

impl Eq for Game {}

/// A pair of positional policies, stored as one successor per vertex.
/// Entries at Max vertices form σ, entries at Min vertices form τ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolicyPair {
    succ: Vec<usize>,
}

impl PolicyPair {
    pub fn from_successors(succ: Vec<usize>) -> PolicyPair {
        PolicyPair { succ }
    }

    /// Default initial pair: every vertex picks its lowest-index successor.
    pub fn lowest_index(g: &Game) -> PolicyPair {
        let succ = (0..g.n())
            .map(|v| {
                let e = *g
                    .out_edges(v)
                    .first()
                    .expect("every vertex needs an out-edge");
                g.edge(e).to
            })
            .collect();
        PolicyPair { succ }
    }

    pub fn successor(&self, v: usize) -> usize {
        self.succ[v]
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    pub fn set_successor(&mut self, v: usize, to: usize) {
        self.succ[v] = to;
    }

    /// True when every chosen successor is a legal edge of `g`.
    pub fn is_valid(&self, g: &Game) -> bool {
        self.succ.len() == g.n()
            && self
                .succ
                .iter()
                .enumerate()
                .all(|(v, &t)| g.edge_index(v, t).is_some())
    }

    /// Edge index chosen at `v`.
    pub fn edge_at(&self, g: &Game, v: usize) -> usize {
        g.edge_index(v, self.succ[v])
            .expect("policy successor must be a legal edge")
    }

    /// True when both pairs pick the same successors on `player`'s vertices.
    pub fn agrees_for(&self, other: &PolicyPair, g: &Game, player: Player) -> bool {
        (0..g.n())
            .filter(|&v| g.owner(v) == player)
            .all(|v| self.succ[v] == other.succ[v])
    }

    /// True when the given edge is the pair's choice at its source vertex.
    pub fn uses_edge(&self, from: usize, to: usize) -> bool {
        self.succ.get(from) == Some(&to)
    }

    /// Max player's choices as (vertex, successor) pairs.
    pub fn sigma(&self, g: &Game) -> Vec<(usize, usize)> {
        (0..g.n())
            .filter(|&v| g.owner(v) == Player::Max)
            .map(|v| (v, self.succ[v]))
            .collect()
    }

    /// Min player's choices as (vertex, successor) pairs.
    pub fn tau(&self, g: &Game) -> Vec<(usize, usize)> {
        (0..g.n())
            .filter(|&v| g.owner(v) == Player::Min)
            .map(|v| (v, self.succ[v]))
            .collect()
    }
}

/// Structural validation result. `ok` holds exactly when no violation
/// was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> ValidationReport {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks the structural invariants: every vertex has an out-edge, no
/// duplicate (from, to) pairs, all endpoints in range. Report-style; never
/// fails.
pub fn validate_game(g: &Game) -> ValidationReport {
    let n = g.n();
    let mut violations = Vec::new();

    let mut out_degree = vec![0usize; n];
    let mut seen = HashMap::new();
    let mut duplicates = Vec::new();
    let mut bad = Vec::new();
    for (idx, e) in g.edges().iter().enumerate() {
        if e.from >= n || e.to >= n {
            bad.push(Violation::BadIndex {
                edge: idx,
                from: e.from,
                to: e.to,
            });
            continue;
        }
        out_degree[e.from] += 1;
        if *seen.entry((e.from, e.to)).and_modify(|c| *c += 1).or_insert(1usize) > 1 {
            duplicates.push(Violation::DuplicateEdge {
                from: e.from,
                to: e.to,
            });
        }
    }
    for (v, &d) in out_degree.iter().enumerate() {
        if d == 0 {
            violations.push(Violation::MissingOutEdge(v));
        }
    }
    violations.extend(duplicates);
    violations.extend(bad);

    ValidationReport::from_violations(violations)
}

/// Applies the affine map w ↦ c·w + a to every weight. The graph itself is
/// unchanged, so validation status is preserved.
pub fn scale_shift_weights(g: &Game, c: &Rat, a: &Rat) -> Result<Game, CoreError> {
    if c <= &Rat::zero() {
        return Err(CoreError::NonPositiveScale(c.clone()));
    }
    let w = WeightVector(g.edges().iter().map(|e| c * &e.weight + a).collect());
    Ok(g.with_weights(&w))
}
