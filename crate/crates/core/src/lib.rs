//! Approximation of min-max k-hub center on graphs of bounded treewidth.
//!
//! Given a connected weighted graph with client and hub-location vertices, a
//! set of client pairs (demands) and a budget `k`, choose at most `k` hubs so
//! that the largest routing cost `min_h d(a, h) + d(h, b)` over demands is
//! small. [`solve`] returns a `(2 + eps)`-approximation by a dynamic program
//! over a tree decomposition; [`oracle`] provides exact answers for small
//! instances and [`reductions`] builds instances from vertex cover, hitting
//! set and k-center.

pub mod arith;
pub mod decomposition;
pub mod distance;
pub mod dp;
pub mod error;
pub mod evaluate;
pub mod format;
pub mod greedy;
pub mod instance;
pub mod oracle;
pub mod preprocess;
pub mod reductions;

pub use arith::Rational;
pub use decomposition::{heuristic_decomposition, make_nice, NiceTreeDecomposition, TreeDecomposition};
pub use distance::{all_pairs_distances, DistanceOracle};
pub use dp::{solve, solve_fixed_r, ColorMode, FixedOutcome, SolveOptions, SolveReport};
pub use error::{Error, Result};
pub use evaluate::{evaluate_solution, Solution};
pub use greedy::greedy_three_approx;
pub use instance::{Demand, Edge, Instance, Role, Vertex};
