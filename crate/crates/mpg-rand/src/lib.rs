//! Seeded instance generation for the smoothed-analysis experiments:
//! graph skeletons whose shape forces a constant game value, and
//! per-edge weight perturbations drawn from normalized distributions.
//!
//! Everything here is deterministic in its `(spec, seed)` arguments and
//! serializes to JSON, so an experiment config pins its instances byte
//! for byte.

mod dist;
mod error;
mod graph;
mod weights;

pub use dist::DistributionSpec;
pub use error::RandError;
pub use graph::{gen_graph, GraphShape, GraphSpec};
pub use weights::{sample_weights, WEIGHT_FRACTIONAL_BITS};
