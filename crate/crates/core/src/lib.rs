//! Ulam-metric rank aggregation: exact distances, median and center solvers,
//! the orthogonal-vectors and Max-Cut reductions to those problems, exact
//! Hamming-to-Ulam embeddings, distance balancing, and brute-force oracles
//! for checking all of it.

pub mod aggregation;
pub mod balancing;
pub mod embeddings;
pub mod gadgets;
pub mod metric;
pub mod oracles;
pub mod perm;
pub mod reductions;

pub use aggregation::{BichromaticInstance, Objective, SolveResult, UlamInstance};
pub use gadgets::{BinaryVector, VectorSet};
pub use perm::{Perm, Symbol};
