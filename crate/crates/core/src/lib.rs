//! Proper left-invariant metrics on groups, computed and checked at desk
//! scale: length functions, weighted word metrics, growth certificates,
//! the metric on `GL(n, ℝ)`, coarse lattices and envelopes, and the affine
//! cocycle embedding into a direct sum of `L^{2n}` spaces.

pub mod coarse;
pub mod cocycle;
pub mod error;
pub mod group;
pub mod length;
pub mod matrix;
pub mod weight;
pub mod word;

pub use error::{Error, Result};
pub use group::{CanonicalElement, FinitelyGenerated, Group, GroupSpec, RandomElement};
pub use length::{
    length_from_metric, metric_from_length, validate_length_axioms, validate_metric_axioms, Axiom,
    LengthFunction, MetricView, ValidationReport,
};
pub use weight::Weight;
pub use word::{WeightedGeneratingSet, WordMetric};
