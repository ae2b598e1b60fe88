//! Seeded generation of game skeletons whose shape alone forces a constant
//! value: complete bipartite graphs, and rings where every added chord
//! jumps forward so that each cycle passes through the wrap edge.

use mpg_core::{paper_fixture, Edge, FixtureParams, Game, Player, Rat, WeightVector};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::RandError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum GraphShape {
    CompleteBipartite { n_max: usize, n_min: usize },
    RingWithChords { n: usize, extra: usize },
    Fixture { name: String },
}

/// Shape plus the ergodicity promise the generator makes for it. The
/// promise is determined by the shape, so serialization carries only the
/// [`GraphShape`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "GraphShape", into = "GraphShape")]
pub struct GraphSpec {
    pub shape: GraphShape,
    /// True when the shape guarantees a constant value for every weight
    /// vector; fixtures make no such structural promise.
    pub ergodic_guaranteed: bool,
}

impl From<GraphShape> for GraphSpec {
    fn from(shape: GraphShape) -> GraphSpec {
        match shape {
            GraphShape::CompleteBipartite { n_max, n_min } => {
                GraphSpec::complete_bipartite(n_max, n_min)
            }
            GraphShape::RingWithChords { n, extra } => GraphSpec::ring_with_chords(n, extra),
            GraphShape::Fixture { name } => GraphSpec::fixture(&name),
        }
    }
}

impl From<GraphSpec> for GraphShape {
    fn from(spec: GraphSpec) -> GraphShape {
        spec.shape
    }
}

impl GraphSpec {
    pub fn complete_bipartite(n_max: usize, n_min: usize) -> GraphSpec {
        GraphSpec {
            shape: GraphShape::CompleteBipartite { n_max, n_min },
            ergodic_guaranteed: true,
        }
    }

    pub fn ring_with_chords(n: usize, extra: usize) -> GraphSpec {
        GraphSpec {
            shape: GraphShape::RingWithChords { n, extra },
            ergodic_guaranteed: true,
        }
    }

    pub fn fixture(name: &str) -> GraphSpec {
        GraphSpec {
            shape: GraphShape::Fixture {
                name: name.to_string(),
            },
            ergodic_guaranteed: false,
        }
    }
}

/// Builds the skeleton for a spec: the full graph with all weights zero.
/// Deterministic in (spec, seed); the seed only matters for shapes with
/// random structure (ring chords).
pub fn gen_graph(spec: &GraphSpec, seed: u64) -> Result<Game, RandError> {
    match &spec.shape {
        GraphShape::CompleteBipartite { n_max, n_min } => complete_bipartite(*n_max, *n_min),
        GraphShape::RingWithChords { n, extra } => ring_with_chords(*n, *extra, seed),
        GraphShape::Fixture { name } => {
            let g = paper_fixture(name, &FixtureParams::default())
                .map_err(|e| RandError::BadSpec(e.to_string()))?;
            let zeros = WeightVector(vec![Rat::zero(); g.m()]);
            Ok(g.with_weights(&zeros))
        }
    }
}

fn complete_bipartite(n_max: usize, n_min: usize) -> Result<Game, RandError> {
    if n_max < 1 || n_min < 1 {
        return Err(RandError::BadSpec(format!(
            "complete bipartite sides must be at least 1, got ({n_max}, {n_min})"
        )));
    }
    let mut owner = vec![Player::Max; n_max];
    owner.extend(std::iter::repeat_n(Player::Min, n_min));
    let mut edges = Vec::with_capacity(2 * n_max * n_min);
    for a in 0..n_max {
        for b in 0..n_min {
            edges.push(zero_edge(a, n_max + b));
        }
    }
    for b in 0..n_min {
        for a in 0..n_max {
            edges.push(zero_edge(n_max + b, a));
        }
    }
    Ok(Game::new(owner, edges))
}

fn ring_with_chords(n: usize, extra: usize, seed: u64) -> Result<Game, RandError> {
    if n < 1 {
        return Err(RandError::BadSpec("ring needs at least one vertex".into()));
    }
    // Forward pairs (u, v) with u < v that are not ring edges.
    let slots = n * n.saturating_sub(1) / 2 - n.saturating_sub(1);
    if extra > slots {
        return Err(RandError::BadSpec(format!(
            "ring of {n} vertices has room for {slots} chords, asked for {extra}"
        )));
    }
    let owner = (0..n)
        .map(|v| if v % 2 == 0 { Player::Max } else { Player::Min })
        .collect();
    let mut edges: Vec<Edge> = (0..n).map(|v| zero_edge(v, (v + 1) % n)).collect();
    if extra > 0 {
        let mut candidates = Vec::with_capacity(slots);
        for u in 0..n {
            for v in u + 2..n {
                candidates.push((u, v));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..extra {
            let (u, v) = candidates.swap_remove(rng.gen_range(0..candidates.len()));
            edges.push(zero_edge(u, v));
        }
    }
    Ok(Game::new(owner, edges))
}

fn zero_edge(from: usize, to: usize) -> Edge {
    Edge {
        from,
        to,
        weight: Rat::zero(),
    }
}
