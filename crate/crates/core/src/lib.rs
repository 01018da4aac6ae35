//! Finite hypothesis classes, Littlestone-dimension structure theory and
//! differentially private proper PAC learning at desk scale.
//!
//! Module map:
//! - [`classes`]: hypotheses, classes, datasets, exact distributions, generators
//! - [`dimensions`]: Littlestone, VC, dual and threshold dimensions
//! - [`structure`]: irreducibility, reducing arrays, SOA, generalized trees
//! - [`dp`]: exponential mechanism, sparse selection, generic learner, exact audits
//! - [`learners`]: ReduceTree, PolyPriLearn, the SOA game cover and PPPLearn
//! - [`cli`]: experiment specs, reports and the `plearn` command implementations

pub mod classes;
pub mod cli;
pub mod dimensions;
pub mod dp;
pub mod error;
pub mod lattice;
pub mod learners;
pub mod rng;
pub mod structure;

pub use error::{Error, Result};
pub use rng::RandomSource;
