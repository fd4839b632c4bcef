//! Distinction graphs and graphtropy.
//!
//! A distinction graph links two nodes when a fixed observer cannot tell them
//! apart. Graphtropy, the fraction of ordered node pairs the observer *can*
//! distinguish, generalizes logical entropy from partitions to arbitrary
//! (intransitive) indistinguishability relations.
//!
//! Modules:
//! - [`graph`]: graphs, dit sets, graphtropy and its conditional, mutual,
//!   product and union forms, partition reduction.
//! - [`weighted`]: interval-weighted graphs and ε-automorphisms.
//! - [`dist`]: distributions over graph pairs.
//! - [`thermo`]: automorphism microstates, maximum-likelihood weightings,
//!   Gibbs reference distributions.
//! - [`algo_info`]: algorithmic-information predictions and simulations.
//! - [`observer`]: memory-graph and entropy-production simulations.
//! - [`ddg`]: dynamic distinction graphs, rule mining, quantum compilation.
//! - [`quantum`]: density matrices, purity and quangraph search.
//! - [`format`]: JSON file formats shared with the command line front end.

// `!(x >= lo)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algo_info;
pub mod automorphism;
pub mod ddg;
pub mod dist;
pub mod error;
pub mod format;
pub mod graph;
pub mod observer;
pub mod quantum;
pub mod rng;
pub mod thermo;
pub mod weighted;

pub use error::{Error, Result};
pub use graph::{DistinctionGraph, DitPair, PartitionView};

/// Exact ratio used for every graphtropy value.
pub type Rational = num_rational::Ratio<i64>;

/// Lossy conversion of an exact ratio.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
