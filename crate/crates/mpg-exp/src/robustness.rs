//! Perturbation probes around a certified instance: how much of the ball
//! B_inf(r, delta) keeps the certified pair inside its cone.

use mpg_core::{cone_membership, rat_from_f64, CoreError, Game, PolicyPair, Rat, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ExpError;

/// First perturbation that pushed the pair out of its cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub sample: usize,
    pub weights: WeightVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub samples: usize,
    pub preserved: usize,
    pub fraction: f64,
    pub counterexample: Option<Counterexample>,
}

/// Samples `samples` points of B_inf(r, delta) around the weights of `g`
/// (even sample indices take corners, odd ones interior points) and checks
/// each against the cone of `pair`. Requires the pair to be certified
/// strictly inside its cone at `r` itself.
pub fn robustness_probe(
    g: &Game,
    pair: &PolicyPair,
    delta: &Rat,
    samples: usize,
    seed: u64,
) -> Result<RobustnessReport, ExpError> {
    let base = cone_membership(g, pair).map_err(|e| match e {
        CoreError::NotSingleCycle => CoreError::NotCertified,
        other => other,
    })?;
    if !base.inside_strict {
        return Err(CoreError::NotCertified.into());
    }
    if delta < &Rat::from_integer(0.into()) {
        return Err(ExpError::BadConfig(format!(
            "radius {delta} must be nonnegative"
        )));
    }

    let weights = g.weights();
    let mut preserved = 0;
    let mut counterexample = None;
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let corner = s % 2 == 0;
        let perturbed: Vec<Rat> = weights
            .iter()
            .map(|w| {
                let eta = if corner {
                    if rng.gen::<bool>() {
                        Rat::from_integer(1.into())
                    } else {
                        Rat::from_integer((-1).into())
                    }
                } else {
                    rat_from_f64(rng.gen_range(-1.0..=1.0)).expect("finite uniform draw")
                };
                w + delta * eta
            })
            .collect();
        let shifted = g.with_weights(&WeightVector(perturbed.clone()));
        // The pair's cycle structure is weight-independent, so membership
        // is always well-defined here.
        let cert = cone_membership(&shifted, pair)?;
        if cert.inside_weak {
            preserved += 1;
        } else if counterexample.is_none() {
            counterexample = Some(Counterexample {
                sample: s,
                weights: WeightVector(perturbed),
            });
        }
    }

    let fraction = if samples == 0 {
        1.0
    } else {
        preserved as f64 / samples as f64
    };
    Ok(RobustnessReport {
        samples,
        preserved,
        fraction,
        counterexample,
    })
}
