//! The `(d,n)`-transducer calculus: words and prefix codes over products of
//! free monoids, finite transducers with their minimization and cores,
//! prefix-exchange elements of the Brin–Thompson groups `dV_n`, and the outer
//! automorphism layer (coordinate permutations, product decomposition,
//! signatures, wreath coordinates).

pub mod algebra;
pub mod canonical;
pub mod dot;
mod error;
pub mod fixtures;
pub mod format;
mod graph;
pub mod outer;
pub mod transducer;
pub mod vgroup;
pub mod words;

pub use algebra::{ConeSet, Injectivity};
pub use canonical::{canonical_form, strongly_isomorphic};
pub use error::{CoherenceWitness, Error, Result};
pub use outer::{CoordPermutation, SigValue, WreathCoordinates};
pub use transducer::{CoreTransducer, Edge, FiniteTransducer, RawTransducer};
pub use vgroup::{LazyTransducer, PrefixExchange};
pub use words::{Cone, Gen, Letter, MultiWord, Params, PrefixCode};

/// Exploration limits shared by the budgeted operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest synchronizing level tried.
    pub kmax: usize,
    /// Depth limit for image iteration and lazy exploration.
    pub depth: usize,
    /// Cap on explored states or configurations.
    pub states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { kmax: 8, depth: 16, states: 20_000 }
    }
}
