//! Exact reduction theory of positive definite quadratic forms in low
//! dimensions.
//!
//! The crate provides Minkowski reduction driven by Tammela's finite
//! inequality tables, exact short-vector enumeration, Voronoi relevant
//! vectors, admissible-centering classification against Ryskov's table and a
//! checker for the coordinate bounds of minimum vectors in Minkowski-reduced
//! bases. All arithmetic is exact.

#![allow(clippy::needless_range_loop)]

pub mod centering;
pub mod corpus;
pub mod enumeration;
mod error;
pub mod exactlin;
pub mod reduction;
pub mod tables;
pub mod voronoi;

pub use error::{Error, Result};
pub use exactlin::{CoordVector, GramMatrix, Rational, UnimodularTransform};
