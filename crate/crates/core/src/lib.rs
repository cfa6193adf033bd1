//! Stretch-width of ordered graphs.
//!
//! The library covers exact and approximate stretch-width, symmetric matrix
//! divisions, overlap graphs of ordered graphs, separators derived from rainbows,
//! instance generators and a maximum independent set solver.

pub mod generators;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod mis;
pub mod overlap;
pub mod separator;
pub mod stretch;

pub use graph::{build_ordered_graph, induced_ordered_subgraph, red_graph, GraphError, OrderedGraph, PartitionSequence, RedGraph, VertexPartition};
