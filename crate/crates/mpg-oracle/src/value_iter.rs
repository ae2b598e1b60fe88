//! Floating-point value iteration for discounted games, as a numeric
//! cross-check of the exact evaluations.

use mpg_core::{rat_to_f64, CoreError, Game, Player, Rat};
use num::{One, Zero};

use crate::error::OracleError;

const MAX_SWEEPS: u64 = 10_000_000;

/// Iterates v ← (1-γ)r + γ·v under optimal one-step choices, starting from
/// zero, until the successive sup-distance drops to tol·(1-γ). Contraction
/// then puts the result within γ·tol of the discounted value.
pub fn value_iteration_discounted(
    g: &Game,
    gamma: &Rat,
    tol: f64,
) -> Result<Vec<f64>, OracleError> {
    if gamma <= &Rat::zero() || gamma >= &Rat::one() {
        return Err(CoreError::BadDiscount(gamma.clone()).into());
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CoreError::Domain("tolerance must be positive".into()).into());
    }
    let gf = rat_to_f64(gamma);
    let one_minus = 1.0 - gf;
    let weights: Vec<f64> = g.edges().iter().map(|e| rat_to_f64(&e.weight)).collect();

    let mut v = vec![0.0f64; g.n()];
    let threshold = tol * one_minus;
    for _ in 0..MAX_SWEEPS {
        let mut next = vec![0.0f64; g.n()];
        for (u, slot) in next.iter_mut().enumerate() {
            let mut best = f64::NAN;
            for &e in g.out_edges(u) {
                let score = one_minus * weights[e] + gf * v[g.edge(e).to];
                if best.is_nan()
                    || (g.owner(u) == Player::Max && score > best)
                    || (g.owner(u) == Player::Min && score < best)
                {
                    best = score;
                }
            }
            *slot = best;
        }
        let diff = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        v = next;
        if diff <= threshold {
            return Ok(v);
        }
    }
    Err(CoreError::Domain("value iteration did not converge within the sweep cap".into()).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mpg_core::{paper_fixture, rat, Edge, FixtureParams};

    fn edge(from: usize, to: usize, w: Rat) -> Edge {
        Edge {
            from,
            to,
            weight: w,
        }
    }

    #[test]
    fn self_loop_converges_to_its_weight() {
        let g = Game::new(vec![Player::Min], vec![edge(0, 0, rat(7, 1))]);
        let v = value_iteration_discounted(&g, &rat(1, 2), 1e-12).unwrap();
        assert!((v[0] - 7.0).abs() <= 1e-11);
    }

    #[test]
    fn blackwell_values_at_one_half() {
        let g = paper_fixture("blackwell", &FixtureParams::default()).unwrap();
        let v = value_iteration_discounted(&g, &rat(1, 2), 1e-10).unwrap();
        let expected = [-0.5, -0.25, 0.0];
        for (got, want) in v.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let g = Game::new(vec![Player::Min], vec![edge(0, 0, rat(0, 1))]);
        assert!(matches!(
            value_iteration_discounted(&g, &rat(3, 2), 1e-9).unwrap_err(),
            OracleError::Core(CoreError::BadDiscount(_))
        ));
        assert!(matches!(
            value_iteration_discounted(&g, &rat(1, 2), 0.0).unwrap_err(),
            OracleError::Core(CoreError::Domain(_))
        ));
    }
}
