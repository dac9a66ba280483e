//! Quality-diversity versus single-population search on pseudo-Boolean
//! coverage problems.
//!
//! The crate provides MAP-Elites and the (mu+1)-EA over bit strings with
//! standard bit-wise mutation, two coverage problem classes (size-constrained
//! monotone submodular maximization and weighted set cover), the bipartite
//! trap instances on which the two algorithms separate, exact brute-force
//! oracles, and a seeded multi-trial experiment harness.

pub mod algorithms;
pub mod analysis;

pub mod error;
pub mod harness;

pub mod instances;
pub mod mutation;
pub mod problems;
pub mod rng;
pub mod solution;
pub mod verify;


pub use error::{Error, Result};
pub use problems::{Direction, Fitness, Problem};
pub use rng::RandomSource;
pub use solution::{FlipMask, Solution};
