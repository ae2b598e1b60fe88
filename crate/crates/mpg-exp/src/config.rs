//! Experiment configuration and per-trial seed derivation.

use std::path::PathBuf;

use mpg_core::{rat_from_str, Rat};
use mpg_rand::{DistributionSpec, GraphSpec};
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ExpError;

/// One batch of smoothed trials: a graph shape, a weight distribution, and
/// the experiment-side parameters. Rational parameters are strings in the
/// JSON (`"0.05"`, `"3/4"`) so configs stay exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub dist: DistributionSpec,
    /// Trial count N.
    pub trials: usize,
    pub master_seed: u64,
    /// Tail-test epsilons, each in (0, 1].
    #[serde(default)]
    pub epsilons: Vec<String>,
    /// Robustness-probe radius overriding the theory delta.
    #[serde(default)]
    pub delta_override: Option<String>,
    /// Target discount; set to solve each trial as a discounted game
    /// instead of a mean-payoff game.
    #[serde(default)]
    pub gamma_bar: Option<String>,
    /// Default output path for the trial CSV.
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    /// Worker threads for the trial batch; 0 leaves the pool size to rayon.
    #[serde(default)]
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        if self.trials < 1 {
            return Err(ExpError::BadConfig("need at least one trial".into()));
        }
        self.dist
            .validate()
            .map_err(|e| ExpError::BadConfig(e.to_string()))?;
        for eps in self.epsilons_rat()? {
            if eps <= Rat::zero() || eps > Rat::one() {
                return Err(ExpError::BadConfig(format!(
                    "epsilon {eps} must lie in (0, 1]"
                )));
            }
        }
        if let Some(delta) = self.delta_override_rat()? {
            if delta < Rat::zero() {
                return Err(ExpError::BadConfig(format!(
                    "delta override {delta} must be nonnegative"
                )));
            }
        }
        if let Some(gamma) = self.gamma_bar_rat()? {
            if gamma <= Rat::zero() || gamma >= Rat::one() {
                return Err(ExpError::BadConfig(format!(
                    "gamma_bar {gamma} must lie strictly between 0 and 1"
                )));
            }
        }
        Ok(())
    }

    pub fn epsilons_rat(&self) -> Result<Vec<Rat>, ExpError> {
        self.epsilons.iter().map(|s| parse_rat(s)).collect()
    }

    pub fn delta_override_rat(&self) -> Result<Option<Rat>, ExpError> {
        self.delta_override.as_deref().map(parse_rat).transpose()
    }

    pub fn gamma_bar_rat(&self) -> Result<Option<Rat>, ExpError> {
        self.gamma_bar.as_deref().map(parse_rat).transpose()
    }
}

fn parse_rat(s: &str) -> Result<Rat, ExpError> {
    rat_from_str(s).ok_or_else(|| ExpError::BadConfig(format!("`{s}` is not a rational literal")))
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sub-stream `index` of a master seed. Trials draw their graph
/// and weight seeds from disjoint indices, so they stay independent under
/// any execution order.
pub fn derived_seed(master: u64, index: u64) -> u64 {
    mix(master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// (graph seed, weight seed) for one trial.
pub fn trial_seeds(master: u64, trial: u64) -> (u64, u64) {
    (
        derived_seed(master, 2 * trial),
        derived_seed(master, 2 * trial + 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            graph: GraphSpec::complete_bipartite(2, 2),
            dist: DistributionSpec::gaussian(0.0, 0.5).unwrap(),
            trials: 4,
            master_seed: 7,
            epsilons: vec!["0.05".into(), "1/2".into()],
            delta_override: None,
            gamma_bar: None,
            csv_path: None,
            threads: 0,
        }
    }

    #[test]
    fn valid_config_parses_its_rationals() {
        let cfg = base_config();
        cfg.validate().unwrap();
        assert_eq!(cfg.epsilons_rat().unwrap(), vec![mpg_core::rat(1, 20), mpg_core::rat(1, 2)]);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let mut cfg = base_config();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.epsilons = vec!["2".into()];
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.epsilons = vec!["nope".into()];
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.gamma_bar = Some("1".into());
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.delta_override = Some("-1/4".into());
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn configs_round_trip_through_json() {
        let cfg = base_config();
        let json = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn derived_seeds_separate_trials_and_roles() {
        let (g0, w0) = trial_seeds(99, 0);
        let (g1, w1) = trial_seeds(99, 1);
        let all = [g0, w0, g1, w1];
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
        assert_eq!(trial_seeds(99, 0), trial_seeds(99, 0));
        assert_ne!(trial_seeds(98, 0), trial_seeds(99, 0));
    }
}
