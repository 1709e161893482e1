//! Solver toolkit for the antibandwidth problem: find a vertex labeling
//! `f: V -> {1..n}` maximizing the smallest label difference across an edge.
//!
//! * [`graph`] and [`io`]: graphs, labelings, instance files.
//! * [`npsolvers`]: anytime stable-set and coloring solvers.
//! * [`bounds`]: upper bounds from degree, size, stability and chromatic number.
//! * [`heuristics`]: constructive heuristics and local search.
//! * [`exact`]: the decision search and the iterative exact solver.
//! * [`mip_export`]: LP-format model files for external MIP solvers.

pub mod bitset;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod mip_export;
pub mod npsolvers;

pub use error::{Error, Result};
pub use graph::{antibandwidth, Graph, Labeling};
