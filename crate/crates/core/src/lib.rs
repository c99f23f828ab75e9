//! Linear discrete complex analysis on planar bipartite quad-graphs.
//!
//! The crate covers discrete holomorphicity on [`QuadGraph`]s, exterior
//! calculus on the medial graph, the discrete Laplacian with a Dirichlet
//! solver, and discrete Green's functions and Cauchy kernels on
//! parallelogram-graphs together with their asymptotic expansions.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod contour;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod forms;
pub mod json;
pub mod kernels;
pub mod lattices;
pub mod operators;
pub mod quadgraph;

#[cfg(test)]
mod testutil;

pub use num_complex::Complex64;

pub use contour::Contour;
pub use error::{Error, Result};
pub use field::{FaceField, Field, VertexField};
pub use quadgraph::{build_quadgraph, Color, MedialFace, MedialPath, MedialStep, QuadGraph, Site, VertexSpec};

/// Short alias used throughout.
pub type C64 = Complex64;
