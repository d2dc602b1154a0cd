//! Polynomial-time kernel for the graphical traveling salesman problem
//! (GTSP) with at most `τ² + τ` vertices, where `τ` is the vertex cover
//! number of the input graph.
//!
//! The pipeline is [`cover`] → [`hopgraph`] → [`matching`] → [`kernel`].
//! [`kernel::lift`] maps any tour of the kernel back to a tour of the input
//! whose weight is exactly the kernel tour weight plus a computed offset,
//! so approximation ratios carry over. [`solvers`] holds the exact and
//! heuristic solvers used as ground truth, and [`genbench`] the instance
//! generators and benchmark harness.

pub mod cli;
pub mod cover;
pub mod genbench;
pub mod graph;
pub mod hopgraph;
pub mod instance;
pub mod kernel;
pub mod matching;
pub mod solvers;

pub use cover::{CoverKind, VertexCover};
pub use graph::{Tour, Weight, WeightedGraph};
pub use instance::GtspInstance;
pub use kernel::{CoverStrategy, KernelResult};
pub use matching::Matching;
