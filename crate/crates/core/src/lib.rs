//! Rooted edge-colored bipartite graphs of fixed degree: melon cores, chain schemes,
//! generating functions, brute-force counts and asymptotics.

pub mod graph;
pub mod reduction;
pub mod scheme;
pub mod series;
pub mod enumerate;
pub mod dipole;
pub mod asymptotics;
pub mod cli;

pub use graph::{ColoredGraph, Edge, GraphError, GraphRecord, PreGraph, Root};
