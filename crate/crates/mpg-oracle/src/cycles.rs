//! Exhaustive simple-cycle enumeration for small graphs.

use mpg_core::{CoreError, Game};

use crate::error::OracleError;

const MAX_CYCLE_VERTICES: usize = 10;

/// Enumerates every simple cycle of the graph as a vertex sequence. Each
/// cycle appears exactly once, rooted at its smallest vertex. Self-loops
/// come out as single-vertex cycles.
pub fn enumerate_simple_cycles(g: &Game) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = g.n();
    if n > MAX_CYCLE_VERTICES {
        return Err(CoreError::TooLarge {
            what: "vertices for cycle enumeration",
            value: n as u128,
            limit: MAX_CYCLE_VERTICES as u128,
        }
        .into());
    }
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for root in 0..n {
        path.push(root);
        on_path[root] = true;
        extend(g, root, root, &mut path, &mut on_path, &mut cycles);
        on_path[root] = false;
        path.pop();
    }
    Ok(cycles)
}

fn extend(
    g: &Game,
    root: usize,
    v: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    cycles: &mut Vec<Vec<usize>>,
) {
    for &e in g.out_edges(v) {
        let w = g.edge(e).to;
        if w == root {
            cycles.push(path.clone());
        } else if w > root && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend(g, root, w, path, on_path, cycles);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Total weight of the cycle's edges divided by its length.
pub fn cycle_mean(g: &Game, cycle: &[usize]) -> mpg_core::Rat {
    use num::Zero;
    let mut total = mpg_core::Rat::zero();
    for k in 0..cycle.len() {
        let from = cycle[k];
        let to = cycle[(k + 1) % cycle.len()];
        let e = g
            .edge_index(from, to)
            .expect("cycle edges must exist in the graph");
        total += g.weight(e);
    }
    total / mpg_core::Rat::from_integer((cycle.len() as i64).into())
}
