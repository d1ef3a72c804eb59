//! Exact combinatorics of triangulations of a product of two simplices
//! `Δ_{m−1} × Δ_{n−1}`.
//!
//! Simplices are edge sets of the complete bipartite graph `K_{m,n}`, and a
//! triangulation is stored as its set of spanning trees. On top of that model
//! the crate provides the staircase, Dyck path, extended Dyck path and
//! rational Dyck path triangulations, matching ensembles, extension of
//! partial triangulations from a skeleton, regularity certificates by height
//! functions and Cayley-trick drawings.

pub mod cayley;
pub mod constructors;
pub mod ensembles;
pub mod error;
pub mod extension;
pub mod lp;
pub mod regularity;
pub mod render;
pub mod simplex;

pub use error::{Error, Result};
pub use simplex::{alternating_circuit, Circuit, Simplex, Support, Triangulation, Vertex};
