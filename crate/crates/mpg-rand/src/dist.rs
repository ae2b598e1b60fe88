//! Weight distributions of the smoothed model: every edge draws
//! independently from a density bounded by phi whose mean lies in [-1, 1].

use serde::{Deserialize, Serialize};

use crate::error::RandError;

/// Per-edge weight distribution. The parameters imply the density bound
/// `phi`: 1/sigma for gaussians, 1/width for uniforms, and the rate for
/// exponentials (whose mean 1/rate forces rate >= 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Gaussian { mean: f64, sigma: f64 },
    Uniform { center: f64, width: f64 },
    Exponential { rate: f64 },
}

impl DistributionSpec {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<DistributionSpec, RandError> {
        let spec = DistributionSpec::Gaussian { mean, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn uniform(center: f64, width: f64) -> Result<DistributionSpec, RandError> {
        let spec = DistributionSpec::Uniform { center, width };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exponential(rate: f64) -> Result<DistributionSpec, RandError> {
        let spec = DistributionSpec::Exponential { rate };
        spec.validate()?;
        Ok(spec)
    }

    /// Density bound implied by the parameters.
    pub fn phi(&self) -> f64 {
        match self {
            DistributionSpec::Gaussian { sigma, .. } => 1.0 / sigma,
            DistributionSpec::Uniform { width, .. } => 1.0 / width,
            DistributionSpec::Exponential { rate } => *rate,
        }
    }

    /// Checks the model normalization: finite parameters, positive spread,
    /// mean within [-1, 1].
    pub fn validate(&self) -> Result<(), RandError> {
        let check_mean = |mean: f64| {
            if !mean.is_finite() || !(-1.0..=1.0).contains(&mean) {
                return Err(RandError::BadSpec(format!(
                    "mean {mean} must lie in [-1, 1]"
                )));
            }
            Ok(())
        };
        match self {
            DistributionSpec::Gaussian { mean, sigma } => {
                check_mean(*mean)?;
                if !sigma.is_finite() || *sigma <= 0.0 {
                    return Err(RandError::BadSpec(format!(
                        "sigma {sigma} must be positive"
                    )));
                }
            }
            DistributionSpec::Uniform { center, width } => {
                check_mean(*center)?;
                if !width.is_finite() || *width <= 0.0 {
                    return Err(RandError::BadSpec(format!(
                        "width {width} must be positive"
                    )));
                }
            }
            DistributionSpec::Exponential { rate } => {
                if !rate.is_finite() || *rate < 1.0 {
                    return Err(RandError::BadSpec(format!(
                        "rate {rate} must be at least 1 so the mean 1/rate stays within [-1, 1]"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_follows_the_kind_rule() {
        assert_eq!(DistributionSpec::gaussian(0.0, 0.2).unwrap().phi(), 5.0);
        assert_eq!(DistributionSpec::uniform(0.5, 0.25).unwrap().phi(), 4.0);
        assert_eq!(DistributionSpec::exponential(2.0).unwrap().phi(), 2.0);
    }

    #[test]
    fn normalization_violations_are_rejected() {
        assert!(DistributionSpec::gaussian(1.5, 0.2).is_err());
        assert!(DistributionSpec::gaussian(0.0, 0.0).is_err());
        assert!(DistributionSpec::uniform(-2.0, 1.0).is_err());
        assert!(DistributionSpec::uniform(0.0, -0.5).is_err());
        assert!(DistributionSpec::exponential(0.5).is_err());
        assert!(DistributionSpec::exponential(f64::NAN).is_err());
    }

    #[test]
    fn specs_round_trip_through_json() {
        let specs = [
            DistributionSpec::gaussian(-0.25, 0.1).unwrap(),
            DistributionSpec::uniform(1.0, 2.0).unwrap(),
            DistributionSpec::exponential(3.0).unwrap(),
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: DistributionSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
    }
}
