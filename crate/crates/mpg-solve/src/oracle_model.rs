//! Truncated-weight oracle: serves every edge weight rounded down to a
//! requested number of fractional bits and charges for the bits revealed.

use mpg_core::{floor_to_fractional_bits, integer_part_bits, CoreError, Rat, WeightVector};
use num::{BigInt, One, Signed};

/// Oracle over a hidden weight vector.  A query with accuracy `eps` returns
/// each weight truncated to `b` fractional bits, where `b` is the smallest
/// count making the grid step `2^-b` at most `eps`.  Bits are charged once
/// per edge for the integer part and once per fractional bit at the finest
/// precision served so far.
#[derive(Debug, Clone)]
pub struct WeightOracle {
    hidden: WeightVector,
    served_bits: Option<u32>,
    bits_charged: u64,
    queries: u64,
}

fn fractional_bits_for(eps: &Rat) -> u32 {
    // Smallest b with 2^-b <= eps, i.e. 2^b * numer(eps) >= denom(eps).
    let mut b = 0u32;
    let mut scaled = eps.numer().clone();
    while scaled < *eps.denom() {
        scaled *= BigInt::from(2);
        b += 1;
    }
    b
}

impl WeightOracle {
    /// Wraps a hidden weight vector.
    pub fn new(hidden: WeightVector) -> Self {
        WeightOracle {
            hidden,
            served_bits: None,
            bits_charged: 0,
            queries: 0,
        }
    }

    /// Number of weights behind the oracle.
    pub fn m(&self) -> usize {
        self.hidden.len()
    }

    /// Total bits charged across all queries so far.
    pub fn bits_charged(&self) -> u64 {
        self.bits_charged
    }

    /// Number of queries served so far.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// The hidden vector, for harnesses that own the ground truth.
    pub fn hidden(&self) -> &WeightVector {
        &self.hidden
    }

    /// Serves the hidden weights truncated to accuracy `eps`.  The returned
    /// vector satisfies `0 <= w - w~ <= 2^-b <= eps` componentwise, and two
    /// queries at accuracies `eps2 <= eps1` are consistent: the coarser
    /// answer is the truncation of the finer one.
    pub fn query(&mut self, eps: &Rat) -> Result<WeightVector, CoreError> {
        if !eps.is_positive() {
            return Err(CoreError::Domain(
                "oracle accuracy must be positive".to_string(),
            ));
        }
        let b = fractional_bits_for(eps);
        self.queries += 1;
        match self.served_bits {
            None => {
                for w in self.hidden.iter() {
                    self.bits_charged += integer_part_bits(w) + u64::from(b);
                }
                self.served_bits = Some(b);
            }
            Some(prev) if b > prev => {
                self.bits_charged += self.hidden.len() as u64 * u64::from(b - prev);
                self.served_bits = Some(b);
            }
            Some(_) => {}
        }
        Ok(WeightVector(
            self.hidden
                .iter()
                .map(|w| floor_to_fractional_bits(w, b))
                .collect(),
        ))
    }
}

/// Truncation step matching a query at accuracy `eps`: `2^-b` for the same
/// `b` the oracle uses, so `||r - r~||_inf` is strictly below it unless a
/// weight sits on the grid.
pub fn truncation_step(eps: &Rat) -> Rat {
    let b = fractional_bits_for(eps);
    Rat::new(BigInt::one(), BigInt::from(2).pow(b))
}

impl WeightOracle {
    /// `true` once the served precision reproduces the hidden weights
    /// exactly (every weight lies on the served dyadic grid).
    pub fn lossless(&self) -> bool {
        match self.served_bits {
            None => false,
            Some(b) => self
                .hidden
                .iter()
                .all(|w| &floor_to_fractional_bits(w, b) == w),
        }
    }
}
