//! Boundary combinatorics of strata of multi-scale k-differentials.
//!
//! The crate materializes the combinatorial data attached to the boundary of
//! the moduli space of k-differentials of a fixed type: enhanced level graphs,
//! cyclic degree-k covers with their deck action, prong-matchings and twist
//! lattices, per-level eigenspace dimensions with the global residue
//! condition, and exact exponent identities for the plumbing fixtures. A
//! numerical component evaluates the local flat-area metric model and the
//! logarithmically singular integrals that control its curvature current.
//!
//! Entry points:
//! - [`signature`]: stratum signatures, canonical-cover signatures, dimensions
//! - [`graph`]: enhanced level graphs, validation, undegeneration, enumeration
//! - [`cover`]: cyclic k-covers of level graphs
//! - [`twist`]: prong-matchings, rotation action, twist lattices, orbit counts
//! - [`residue`]: eigenspace dimensions, residue conditions, dimension identity
//! - [`plumbing`]: symbolic plumbing-fixture identities
//! - [`metric`]: area metric model, curvature blocks, quadrature checks
//! - [`cli`]: the `kms` command-line surface

pub mod cli;
pub mod cover;
pub mod cyclotomic;
pub mod graph;
pub mod lattice;
pub mod metric;
pub mod plumbing;
pub mod residue;
pub mod signature;
pub mod twist;

pub use cover::GraphCover;
pub use graph::EnhancedLevelGraph;
pub use signature::{CoverSignature, Signature};
