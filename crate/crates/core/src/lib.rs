//! Exact kernel maps, kernel sets, bilattices and rank-one decompositions of
//! operators relative to finite subspace lattices and nests, together with
//! Lie-module closure and decomposability checks.
//!
//! Everything runs over an exact field ([`BigRational`] or
//! [`GaussianRational`]), so every identity the library relies on can be
//! checked by equality rather than up to a tolerance.

pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod float;
pub mod invariants;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod liemod;
pub mod matrix;
pub mod random;
pub mod report;
pub mod scalar;
pub mod subspace;

pub use error::{Error, Result};
pub use lattice::{Nest, Partition, SubspaceLattice};
pub use matrix::{outer, Matrix, Vector};
pub use num::BigRational;
pub use scalar::{Field, GaussianRational, Scalar};
pub use subspace::Subspace;
