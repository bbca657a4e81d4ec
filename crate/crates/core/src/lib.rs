//! Realize a 3-connected planar graph as a convex polyhedron together with a
//! spanning cut-tree whose edge unfolding overlaps itself.

pub mod combinatorics;
pub mod embedding;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod lifting;
pub mod pipeline;
pub mod shaping;
pub mod unfolding;
