//! Erasure codes whose decodable erasure patterns are restricted to a
//! k-uniform hypergraph.
//!
//! The crate bundles:
//!
//! * exact arithmetic in small finite fields ([`galois`]),
//! * hypergraph representation and strong-coloring solvers ([`hypergraph`]),
//! * code tables with exact / error-tolerant / average-error verifiers
//!   ([`codes`]),
//! * code constructions: coloring composition, projective linear codes,
//!   average-error cliques, and pullback along homomorphisms ([`construct`]),
//! * the universal graphs on balanced vectors together with their canonical
//!   independent-set covers ([`universal`]),
//! * exhaustive oracles for the minimum alphabet size on tiny instances
//!   ([`search`]).
//!
//! All probabilities are exact rationals; verdicts never go through floating
//! point.

pub mod codes;
pub mod construct;
pub mod galois;
pub mod hypergraph;
pub mod rational;
pub mod search;
pub mod selftest;
pub mod universal;

pub use codes::{Certificate, Code, EdgeDecoder, VerifyMode};
pub use galois::FieldSpec;
pub use hypergraph::{Coloring, Hypergraph};
pub use universal::UniversalVertex;
