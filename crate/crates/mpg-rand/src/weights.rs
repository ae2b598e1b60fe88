//! Smoothed-model weight sampling. Each edge draws from its own ChaCha8
//! stream keyed by the edge index, so adding edges to a skeleton never
//! disturbs the weights already assigned to earlier edges. Draws are
//! floored to 64 fractional bits, which makes every weight an exact
//! dyadic rational.

use mpg_core::{floor_to_fractional_bits, rat_from_f64, Game, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Normal, Uniform};

use crate::dist::DistributionSpec;
use crate::error::RandError;

pub const WEIGHT_FRACTIONAL_BITS: u32 = 64;

/// Replaces every weight of `g` with an independent draw from `dist`.
/// Deterministic in (g, dist, seed).
pub fn sample_weights(g: &Game, dist: &DistributionSpec, seed: u64) -> Result<Game, RandError> {
    dist.validate()?;
    let mut weights = Vec::with_capacity(g.m());
    for idx in 0..g.m() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let x = draw(dist, &mut rng);
        let exact = rat_from_f64(x)
            .ok_or_else(|| RandError::BadSpec(format!("non-finite draw {x} from {dist:?}")))?;
        weights.push(floor_to_fractional_bits(&exact, WEIGHT_FRACTIONAL_BITS));
    }
    Ok(g.with_weights(&WeightVector(weights)))
}

fn draw(dist: &DistributionSpec, rng: &mut ChaCha8Rng) -> f64 {
    match dist {
        DistributionSpec::Gaussian { mean, sigma } => {
            rng.sample(Normal::new(*mean, *sigma).expect("validated sigma"))
        }
        DistributionSpec::Uniform { center, width } => {
            let half = width / 2.0;
            rng.sample(Uniform::new_inclusive(center - half, center + half))
        }
        DistributionSpec::Exponential { rate } => {
            rng.sample(Exp::new(*rate).expect("validated rate"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_graph, GraphSpec};
    use mpg_core::{rat, rat_to_f64, Rat};
    use num::bigint::BigInt;
    use num::One;

    fn ring(n: usize, extra: usize, seed: u64) -> Game {
        gen_graph(&GraphSpec::ring_with_chords(n, extra), seed).unwrap()
    }

    #[test]
    fn same_seed_reproduces_every_weight() {
        let g = ring(8, 5, 4);
        let dist = DistributionSpec::gaussian(0.25, 0.5).unwrap();
        let a = sample_weights(&g, &dist, 99).unwrap();
        let b = sample_weights(&g, &dist, 99).unwrap();
        assert_eq!(a.weights(), b.weights());
        let c = sample_weights(&g, &dist, 100).unwrap();
        assert_ne!(a.weights(), c.weights());
    }

    #[test]
    fn earlier_edges_keep_their_draws_when_edges_are_appended() {
        let plain = ring(6, 0, 7);
        let chorded = ring(6, 3, 7);
        let dist = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let a = sample_weights(&plain, &dist, 21).unwrap();
        let b = sample_weights(&chorded, &dist, 21).unwrap();
        assert_eq!(a.weights().0, b.weights().0[..6]);
    }

    #[test]
    fn uniform_draws_stay_inside_the_stated_support() {
        let g = ring(200, 0, 0);
        let dist = DistributionSpec::uniform(-0.5, 0.5).unwrap();
        let sampled = sample_weights(&g, &dist, 5).unwrap();
        let hi = rat(-1, 4);
        let slack = Rat::new(BigInt::one(), BigInt::one() << WEIGHT_FRACTIONAL_BITS);
        let lo = rat(-3, 4) - slack;
        for w in sampled.weights().iter() {
            assert!(w <= &hi && w >= &lo, "weight {w} outside [-3/4, -1/4]");
        }
    }

    #[test]
    fn weights_are_dyadic_with_at_most_64_fractional_bits() {
        let g = ring(50, 20, 2);
        let dist = DistributionSpec::gaussian(0.0, 0.2).unwrap();
        let sampled = sample_weights(&g, &dist, 77).unwrap();
        let scale = Rat::from(BigInt::one() << WEIGHT_FRACTIONAL_BITS);
        for w in sampled.weights().iter() {
            assert!((w * &scale).is_integer(), "weight {w} is not 64-bit dyadic");
        }
    }

    #[test]
    fn gaussian_sample_statistics_match_the_parameters() {
        let g = ring(10_000, 0, 0);
        let dist = DistributionSpec::gaussian(0.0, 0.2).unwrap();
        let sampled = sample_weights(&g, &dist, 1234).unwrap();
        let xs: Vec<f64> = sampled.weights().iter().map(rat_to_f64).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(mean.abs() <= 4.0 * 0.2 / n.sqrt(), "sample mean {mean} too far from 0");
        assert!((0.032..=0.048).contains(&var), "sample variance {var} outside 20% of 0.04");
    }

    #[test]
    fn exponential_draws_are_positive_with_the_right_scale() {
        let g = ring(10_000, 0, 0);
        let dist = DistributionSpec::exponential(2.0).unwrap();
        let sampled = sample_weights(&g, &dist, 8).unwrap();
        let xs: Vec<f64> = sampled.weights().iter().map(rat_to_f64).collect();
        assert!(xs.iter().all(|x| *x >= 0.0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "sample mean {mean} far from 1/2");
    }

    #[test]
    fn invalid_specs_are_rejected_even_when_built_without_constructors() {
        let dist: DistributionSpec =
            serde_json::from_str(r#"{"kind":"uniform","center":0.0,"width":-1.0}"#).unwrap();
        let g = ring(3, 0, 0);
        assert!(matches!(
            sample_weights(&g, &dist, 0),
            Err(RandError::BadSpec(_))
        ));
    }
}
