//! Structural sparsity invariants and restricted homomorphism dualities on
//! small graphs.
//!
//! The crate covers tree-depth with certificates, grads `∇_r`, centered and
//! low tree-depth colorings, the `p`-truncated `H`-power construction with
//! its color projection, a restricted-duality pipeline over finite corpora,
//! and exact powers with exact chromatic numbers.

pub mod catalog;
pub mod cli;
pub mod colorings;
pub mod duality;
pub mod error;
mod flow;
pub mod graph;
pub mod hom;
pub mod powers;
pub mod sparsity;

pub use error::{Error, Result};
pub use graph::{disjoint_union, BallFamily, Graph, VertexSet};
pub use hom::{HomOutcome, SearchLimits, VertexMap};

/// Exact rational values for densities.
pub type Rational = num_rational::Ratio<i64>;

pub(crate) mod rational_serde {
    use serde::Serializer;

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn serialize_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }
}
