//! Certification toolkit for convex projective geometry: Hilbert metrics via
//! membership oracles, polytopal cone duality and characteristic functions,
//! singular-value divergence diagnostics for matrix groups, sample-level
//! checkers for cusp-holonomy conditions, and generalized cusp domain
//! construction.

pub mod error;
pub mod scalar;
pub mod matrix;
pub mod linalg;
pub mod lp;
pub mod projective;
pub mod cone;
pub mod domain;
pub mod hull;
pub mod smoothing;
pub mod group;
pub mod gallery;
pub mod verdict;
pub mod buckets;
pub mod dynamics;

pub use error::{Error, Result};
