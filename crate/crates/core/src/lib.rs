//! Online selection with limited distributional information.
//!
//! The crate brings together the pieces needed to run and cross-check
//! single-sample (and constant-sample) online selection algorithms:
//!
//! - [`env`] — selection environments (matroid variants and degree-bounded
//!   bipartite matchings) with exact offline oracles,
//! - [`dist`] — product value distributions, quantiles, virtual values,
//! - [`secretary`] — order-oblivious secretary algorithms and the free-order
//!   matroid algorithm,
//! - [`prophet`] — the sample-fed online algorithms: the secretary-to-prophet
//!   reduction, the rehearsal algorithm for uniform matroids, and the priced
//!   matching algorithm,
//! - [`walk`] — correlated random-walk traces and the exact enumeration
//!   oracles that certify the rehearsal analysis,
//! - [`mech`] — posted-price mechanisms: threshold payments, reserve
//!   policies, copies instances, and revenue benchmarks.
//!
//! Everything here is `no_std + alloc`; IO, configuration files and the CLI
//! live in the companion `prophet-harness` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dist;
pub mod env;
pub mod error;
pub mod graph;
pub mod mech;
pub mod prophet;
pub mod rng;
pub mod secretary;
pub mod walk;

pub use dist::{Marginal, ProductDistribution};
pub use env::{Environment, FeasibleSet, WeightVector};
pub use error::{Error, Result};
pub use graph::BipartiteGraph;
pub use rng::Stream;
