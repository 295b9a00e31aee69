//! Algorithms for unions of uniform spanning trees.
//!
//! The crate is `#![no_std]` and only needs `alloc`. It covers:
//!
//! * [`graph`]: simple undirected graphs, the `G(n,p)` / `G(n,m)` generators
//!   and a coupled infinite random graph whose restrictions are nested.
//! * [`electrical`]: unit-resistor networks, effective resistance and the
//!   edge-inclusion probabilities of a uniform spanning tree.
//! * [`tree_count`]: spanning-tree counts in the log domain (Cayley,
//!   matrix-tree determinant, brute-force enumeration, Grimmett's bound).
//! * [`tree_sample`]: Wilson's loop-erased random walk sampler.
//! * [`poisson_limit`]: the overlap statistic of `k` independent uniform
//!   trees and its distance to a Poisson law.
//! * [`tail_moments`]: moments and upper tails of the tree count in `G(n,m)`.
//! * [`lil`]: log tree counts along a coupled family of `G(n,p)` graphs.
//!
//! Every random quantity is a pure function of an explicit 64-bit seed.
//! Vertices are numbered `0..n`.
#![no_std]
// `!(x > 0.0)` guards deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod electrical;
pub mod error;
pub mod graph;
pub mod lil;
pub mod linalg;
pub mod logvalue;
pub(crate) mod math;
pub mod poisson_limit;
pub mod rng;
pub mod stats;
pub mod tail_moments;
pub mod tree_count;
pub mod tree_sample;

pub use error::{Error, Result};
pub use graph::{CoupledGraphSource, Edge, EdgeSet, Graph};
pub use logvalue::LogValue;
pub use stats::EmpiricalDist;
