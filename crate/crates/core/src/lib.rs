//! Push&pull rumour spreading on connected graphs: synchronous and
//! asynchronous simulation engines, first-passage-percolation oracles,
//! simple-path analysis, Monte Carlo estimators and size sweeps.
//!
//! Enable the default `parallel` feature to run trials on the rayon pool;
//! without it every estimator runs sequentially with identical results.

pub mod async_engine;
pub mod catalog;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod graph;
pub mod path_analysis;
pub mod report;
pub mod rng;
mod shortest_path;
pub mod stats;
pub mod sync_engine;

pub use catalog::GraphSpec;
pub use error::{Error, Result};
pub use estimator::{estimate, estimate_with, Engine, Execution, Protocol, TrialSummary};
pub use graph::{DiamondLayout, Graph, VertexId};
