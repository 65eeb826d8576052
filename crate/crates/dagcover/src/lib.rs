//! DAG covers of weighted directed graphs.
//!
//! A *DAG cover* of a directed graph `G` is a small collection of DAGs over
//! the vertex set of `G`, allowed to use a bounded number of edges not present
//! in `G`, such that reachability (and, for distance covers, approximate
//! shortest-path distance) between every vertex pair is realized by at least
//! one DAG in the collection.
//!
//! The crate provides:
//!
//! - exact graph oracles (SCCs in condensation order, topological order,
//!   Dijkstra distances, transitive closure, weak diameter) in [`graph`];
//! - a randomized low-diameter edge decomposition in [`ldd`];
//! - the recursive level decomposition, vertex total order, and per-level
//!   representatives in [`hierarchy`];
//! - the main randomized two-DAG distance cover, the repeated cover, and the
//!   single-DAG embedding sampler in [`cover`];
//! - three baseline covers (two-DAG reachability, random-order exact with a
//!   landmark hopset, per-root shortest-path trees) in [`baselines`];
//! - hard-instance generators (directed cycles, a log-diameter cycle family,
//!   a slope grid with a unique-shortest-path family, its layered product,
//!   and a randomized clique replacement) in [`gen`];
//! - brute-force verification of covers and instances in [`verify`];
//! - reference oracles used to cross-check the fast implementations in
//!   [`oracle`].
//!
//! All randomized procedures are deterministic functions of an explicit
//! 64-bit seed, independent of the parallelism degree.

pub mod baselines;
pub mod cover;
pub mod error;
pub mod gen;
pub mod graph;
pub mod hierarchy;
pub mod ldd;
pub mod oracle;
pub mod par;
pub mod rational;
pub mod rng;
pub mod verify;

pub use error::Error;
pub use graph::{Dag, DagCover, DistanceMatrix, WeightedDigraph};
pub use rational::Rational;
