//! Pebbling on the rook's graph `K_n □ K_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`config`], [`space`] and [`exact`] hold graph-agnostic pebbling
//!   semantics: configurations, pebbling moves, the uniform configuration space
//!   and an exhaustive solvability oracle for small graphs.
//! * [`rook`] specialises to the rook's graph: cops, citizens and robbers,
//!   police components, constructive catch plans and a tiered solver whose
//!   tiers live in a name-keyed registry.
//! * [`bipartite`] holds the random bipartite (multi)graph models and the
//!   configuration/multigraph correspondence.
//! * [`support`] has exact statistics of the support size of a uniform
//!   random multigraph.
//! * [`lab`] runs Monte Carlo sweeps and the experiments built on top.

pub mod bipartite;
pub mod config;
pub mod error;
pub mod exact;
pub mod graph;
pub mod lab;
pub mod rng;
pub mod rook;
pub mod space;
pub mod support;

pub use config::PebbleConfiguration;
pub use error::{Error, Result};
pub use graph::SimpleGraph;
