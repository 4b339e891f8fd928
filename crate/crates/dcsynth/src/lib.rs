//! Directed controller synthesis with learned exploration policies.
//!
//! The crate explores the composed plant of a modular discrete-event system
//! on the fly, classifies discovered states as winning or losing, and stops
//! as soon as the initial state is decided. Which frontier transition to
//! expand next is a pluggable policy: fixed heuristics (BFS, DFS, the RA
//! ready-abstraction heuristic) or learned ones (a feature-based Q-network
//! and a graph neural network over the exploration graph).
//!
//! Entry points:
//! - [`benchmarks::generate_benchmark`] builds parametric plant models,
//! - [`engine::run_dcs`] runs synthesis under a policy,
//! - [`oracle::monolithic_oracle`] cross-checks against the explicit product.

pub mod benchmarks;
pub mod cli;
pub mod engine;
pub mod features;
pub mod graph;
pub mod lts;
pub mod nn;
pub mod model_io;
pub mod oracle;
pub mod policy;
pub mod train;
