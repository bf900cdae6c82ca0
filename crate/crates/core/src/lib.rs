//! Exact construction and certification of N=6 3-algebras.
//!
//! The crate builds the finite-dimensional matrix families and the polynomial families of
//! physical N=6 3-algebras, checks their axioms over exact Gaussian rationals, passes between
//! 3-algebras and short-graded Lie superalgebras with an anti-linear graded conjugation, and
//! produces explicit isomorphism witnesses.

pub mod corpus;
pub mod error;
pub mod families;
pub mod functions;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod superalg;
pub mod tower;
pub mod triple;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{ConjMap, Linearity, MatC, Span};
pub use scalar::{Backend, Scalar};
pub use triple::{AxiomReport, CheckMode, TriSystem};

/// Default residual tolerance for float computations.
pub const DEFAULT_TOL: f64 = 1e-9;
