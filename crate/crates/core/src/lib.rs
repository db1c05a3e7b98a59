//! Combinatorics of graph associahedra.
//!
//! The vertices of the `G`-associahedron are the elimination trees of a
//! connected graph `G`; its edges are swaps of a node with its parent.
//! This crate provides:
//!
//! * [`graph`]: the labeled undirected graph substrate, components, cuts and
//!   small brute-force cut oracles;
//! * [`elim`]: elimination trees, the swap move, ancestor queries and
//!   projections onto connected vertex subsets;
//! * [`flip`]: the flip graph as an implicit graph, with unweighted and
//!   weighted shortest paths, enumeration and exact diameters;
//! * [`reduction`]: the balanced-min-cut gadget instance and the clique
//!   blow-up that turns weighted instances into unweighted ones;
//! * [`polymatroid`]: the rank function whose base polytope realizes the
//!   associahedron, greedy extreme points and Devadoss coordinates.
//!
//! Data-parallel loops (per-source BFS, subset sweeps, projection families)
//! run on rayon when the `parallel` feature is enabled and fall back to plain
//! iterators otherwise; see [`par`].

pub mod elim;
pub mod error;
pub mod families;
pub mod flip;
pub mod graph;
pub mod par;
pub mod polymatroid;
pub mod reduction;

pub use elim::{ElimTree, SwapMove, VertexOrder};
pub use error::{Error, Result};
pub use flip::{ReconfigSequence, SearchLimits, WeightFn};
pub use graph::{Graph, VertexSet};
pub use par::Exec;
