//! Exact computations on nilpotent Lie algebras: Chevalley–Eilenberg
//! cohomology, symplectic and bi-Lagrangian structures, the canonical
//! connection with its curvature, and parametric identities.

pub mod catalog;
pub mod connection;
pub mod error;
pub mod expr;
pub mod golden;
pub mod exterior;
pub mod kernel;
pub mod lemmas;
pub mod lie;
pub mod parametric;
pub mod poly;
pub mod report;
pub mod search;
pub mod symplectic;
pub mod tables;

pub use error::{Error, ParseError, Result};
pub use kernel::{Matrix, Rational};
pub use lie::{LieAlgebra, Subspace, Vector};
